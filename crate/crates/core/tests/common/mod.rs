//! Random formulas, sequents and derivations for the integration tests.
#![allow(dead_code)]

use llmfoc::kernel::{check_with, CheckOptions, Derivation, FocCtx, FocItem, Mode, NegCtx, PosCtx, Sequent};
use llmfoc::search::{enumerate, prove, SearchBudget};
use llmfoc::syntax::{Formula, Neg, Pos};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::collections::HashSet;

pub const ATOMS: [&str; 4] = ["a", "b", "c", "d"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn atom(rng: &mut StdRng, atoms: usize) -> &'static str {
    ATOMS[rng.gen_range(0..atoms.clamp(1, ATOMS.len()))]
}

/// A positive formula with at most `size` connectives.
pub fn random_pos(rng: &mut StdRng, size: usize, atoms: usize) -> Pos {
    if size == 0 {
        return match rng.gen_range(0..10) {
            0 => Pos::One,
            1 => Pos::Zero,
            _ => Pos::atom(atom(rng, atoms)),
        };
    }
    let split = |rng: &mut StdRng| {
        let l = rng.gen_range(0..size);
        (l, size - 1 - l)
    };
    match rng.gen_range(0..8) {
        0..=2 => {
            let (l, r) = split(rng);
            Pos::tensor(random_pos(rng, l, atoms), random_pos(rng, r, atoms))
        }
        3 => {
            let (l, r) = split(rng);
            Pos::plus(random_pos(rng, l, atoms), random_pos(rng, r, atoms))
        }
        4 => Pos::bang(random_neg(rng, size - 1, atoms)),
        _ => Pos::up(random_neg(rng, size - 1, atoms)),
    }
}

/// A negative formula with at most `size` connectives.
pub fn random_neg(rng: &mut StdRng, size: usize, atoms: usize) -> Neg {
    random_pos(rng, size, atoms).dual()
}

pub fn random_formula(rng: &mut StdRng, size: usize, atoms: usize) -> Formula {
    if rng.gen_bool(0.5) {
        Formula::Pos(random_pos(rng, size, atoms))
    } else {
        Formula::Neg(random_neg(rng, size, atoms))
    }
}

/// A focused context; about half of the passives are downshifts.
pub fn random_foc_ctx(rng: &mut StdRng, len: usize) -> FocCtx {
    let mut items = Vec::new();
    for _ in 0..len {
        let item = match rng.gen_range(0..4) {
            0 => FocItem::Focus(random_pos(rng, 2, 3)),
            1 | 2 => FocItem::Passive(Neg::down(random_pos(rng, 2, 3))),
            _ => FocItem::Passive(match random_neg(rng, 2, 3) {
                Neg::Down(_) => Neg::natom(atom(rng, 3)),
                n => n,
            }),
        };
        items.push(item);
    }
    items.into()
}

pub fn arb_pos() -> impl Strategy<Value = Pos> {
    let leaf = prop_oneof![
        4 => prop::sample::select(&ATOMS[..]).prop_map(Pos::atom),
        1 => Just(Pos::One),
        1 => Just(Pos::Zero),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Pos::tensor(p, q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Pos::plus(p, q)),
            inner.clone().prop_map(|p| Pos::bang(p.dual())),
            inner.clone().prop_map(|p| Pos::up(p.dual())),
            inner.prop_map(|p| Pos::up(Neg::down(p))),
        ]
    })
}

pub fn arb_neg() -> impl Strategy<Value = Neg> {
    arb_pos().prop_map(|p| p.dual())
}

pub fn arb_formula() -> impl Strategy<Value = Formula> {
    prop_oneof![arb_pos().prop_map(Formula::Pos), arb_neg().prop_map(Formula::Neg)]
}

/// A provable-looking sequent: a few formulas next to pieces of their duals.
pub fn random_sequent(rng: &mut StdRng, per_prob: f64) -> Sequent {
    let mut per = PosCtx::new();
    if rng.gen_bool(per_prob) {
        let size = rng.gen_range(0..2);
        per.insert(random_pos(rng, size, 3));
    }
    let mut ctx = NegCtx::new();
    if let Some(p) = per.iter().next() {
        if rng.gen_bool(0.6) {
            ctx.insert(p.dual());
        }
    }
    for _ in 0..rng.gen_range(1..=2) {
        let size = rng.gen_range(0..3);
        let p = random_pos(rng, size, 3);
        if rng.gen_bool(0.8) {
            ctx.insert(p.dual());
        }
        ctx.insert(Neg::down(p));
    }
    if ctx.len() < 4 && rng.gen_bool(0.3) {
        ctx.insert(Neg::natom(atom(rng, 3)));
    }
    if ctx.len() < 4 && rng.gen_bool(0.3) {
        ctx.insert(Neg::down(Pos::atom(atom(rng, 3))));
    }
    if rng.gen_bool(0.1) {
        ctx.insert(Neg::Top);
    }
    if rng.gen_bool(0.5) {
        Sequent::inv(per, ctx)
    } else {
        // Focus one downshift to get a focused goal.
        let downs: Vec<Pos> =
            ctx.iter().filter_map(|n| if let Neg::Down(p) = n { Some((**p).clone()) } else { None }).collect();
        let p = downs.choose(rng).expect("a downshift").clone();
        let rest = ctx.without(&Neg::down(p.clone())).expect("member");
        let mut items: FocCtx = rest.iter().map(|n| FocItem::Passive(n.clone())).collect::<Vec<_>>().into();
        items.insert(FocItem::Focus(p));
        Sequent::foc(per, items)
    }
}

pub fn budget(depth: usize) -> SearchBudget {
    SearchBudget { depth, limit: 200, copy_cap: 1 }
}

/// Search-found proofs of random sequents with all their subderivations,
/// deduplicated, of height at most `max_height`.
pub fn search_corpus(seed: u64, want: usize, max_height: usize) -> Vec<Derivation> {
    corpus_with(seed, want, max_height, 0.25)
}

fn corpus_with(seed: u64, want: usize, max_height: usize, per_prob: f64) -> Vec<Derivation> {
    let mut rng = rng(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for _ in 0..want * 40 {
        if out.len() >= want {
            break;
        }
        let s = random_sequent(&mut rng, per_prob);
        if let Some(d) = prove(&s, budget(max_height)) {
            d.visit(&mut |_, n| {
                if n.height() <= max_height && seen.insert(n.clone()) {
                    out.push(n.clone());
                }
            });
        }
    }
    out
}

/// Focused derivations with at least one focus in the conclusion.
pub fn focused_corpus(seed: u64, want: usize, max_height: usize) -> Vec<Derivation> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut seed = seed;
    while out.len() < want {
        for d in search_corpus(seed, want, max_height) {
            if d.conclusion.foc_ctx().is_some_and(|c| c.iter().any(FocItem::is_focus)) && seen.insert(d.clone()) {
                out.push(d);
            }
        }
        seed += 1_000;
    }
    out
}

/// Subderivations with two or more foci, taken from every proof of random
/// sequents with several downshifts.
pub fn multifocus_corpus(seed: u64, want: usize, max_height: usize) -> Vec<Derivation> {
    let mut rng = rng(seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for _ in 0..want * 40 {
        if out.len() >= want {
            break;
        }
        let mut ctx = NegCtx::new();
        for _ in 0..2 {
            let size = rng.gen_range(0..3);
            let p = random_pos(&mut rng, size, 3);
            if rng.gen_bool(0.7) {
                ctx.insert(p.dual());
            }
            ctx.insert(Neg::down(p));
        }
        let s = Sequent::inv(PosCtx::new(), ctx);
        let b = SearchBudget { depth: max_height.min(6), limit: 40, copy_cap: 1 };
        for d in enumerate(&s, b).unwrap_or_default() {
            d.visit(&mut |_, n| {
                let foci = n.conclusion.foc_ctx().map_or(0, |c| c.iter().filter(|i| i.is_focus()).count());
                if foci >= 2 && n.height() <= max_height && seen.insert(n.clone()) {
                    out.push(n.clone());
                }
            });
        }
    }
    out
}

pub fn focus_indices(d: &Derivation) -> Vec<usize> {
    d.conclusion
        .foc_ctx()
        .map_or(vec![], |c| c.iter().enumerate().filter(|(_, i)| i.is_focus()).map(|(i, _)| i).collect())
}

const PREMISE_DEPTH: usize = 5;

fn try_prove(s: Sequent, depth: usize) -> Option<Derivation> {
    prove(&s, budget(depth))
}

fn neg_pool(rng: &mut StdRng, p: &Pos) -> Vec<NegCtx> {
    let mut pool = vec![
        NegCtx::new(),
        NegCtx::singleton(Neg::down(p.clone())),
        NegCtx::singleton(Neg::natom(atom(rng, 3))),
        NegCtx::singleton(Neg::down(random_pos(rng, 1, 3))),
        vec![Neg::natom(atom(rng, 3)), Neg::down(Pos::atom(atom(rng, 3)))].into(),
    ];
    pool.shuffle(rng);
    pool.push(NegCtx::singleton(Neg::Top));
    pool
}

#[derive(Clone, Debug)]
pub struct CutInstance {
    pub kind: &'static str,
    pub derivation: Derivation,
}

/// `cut`: a focused proof with focus `P` against an inversion proof of `Γ,P^⊥`.
fn linear_cut(rng: &mut StdRng, d: &Derivation, fi: usize) -> Option<Derivation> {
    let FocItem::Focus(p) = d.conclusion.foc_ctx()?.get(fi)?.clone() else { return None };
    let per = d.conclusion.per().clone();
    for gamma in neg_pool(rng, &p) {
        if let Some(e) = try_prove(Sequent::inv(per.clone(), gamma.with(p.dual())), PREMISE_DEPTH) {
            // Focus-free Ψ: half of these keep the focused judgment and
            // need the flexible flavor.
            let c = Derivation::cut(d.clone(), e.clone(), &p).ok()?;
            if !c.conclusion.is_focused() && rng.gen_bool(0.5) {
                return Derivation::cut_focused_unchecked(d.clone(), e, &p).ok();
            }
            return Some(c);
        }
    }
    None
}

/// `fcut`: a focused proof with a passive `N` against one of `⊨ Ψ,[N^⊥]`.
fn focused_cut(rng: &mut StdRng, e: &Derivation) -> Option<Derivation> {
    let ctx = e.conclusion.foc_ctx()?;
    let passives: Vec<Neg> = ctx.iter().filter_map(|i| i.as_passive().cloned()).collect();
    let n = passives.choose(rng)?.clone();
    let p = n.dual();
    let per = e.conclusion.per().clone();
    for gamma in neg_pool(rng, &p) {
        let mut items: FocCtx = gamma.iter().map(|g| FocItem::Passive(g.clone())).collect::<Vec<_>>().into();
        items.insert(FocItem::Focus(p.clone()));
        if let Some(d) = try_prove(Sequent::foc(per.clone(), items), PREMISE_DEPTH) {
            return Derivation::fcut(d, e.clone(), &p).ok();
        }
    }
    None
}

/// `cutBang`/`fcutBang`: drop one persistent formula `P` of `e` by a proof of `P^⊥`.
fn persistent_cut(rng: &mut StdRng, e: &Derivation) -> Option<Derivation> {
    let e =
        &if e.conclusion.per().is_empty() || rng.gen_bool(0.2) { e.weaken(&random_pos(rng, 1, 3)) } else { e.clone() };
    let per = e.conclusion.per().clone();
    let p = per.distinct().choose(rng).map(|p| (*p).clone())?;
    let rest = per.without(&p)?;
    let d = try_prove(Sequent::inv(rest, NegCtx::singleton(p.dual())), PREMISE_DEPTH)?;
    if e.conclusion.is_focused() {
        Derivation::fcut_bang(d, e.clone(), &p).ok()
    } else {
        Derivation::cut_bang(d, e.clone(), &p).ok()
    }
}

/// Random cut instances of all four kinds over search-found premises.
pub fn cut_instances(seed: u64, per_kind: usize) -> Vec<CutInstance> {
    let mut rng = rng(seed);
    let mut out: Vec<CutInstance> = Vec::new();
    let counts = |out: &Vec<CutInstance>, k: &str| out.iter().filter(|c| c.kind == k).count();
    let mut round = 0;
    while ["cut", "fcut", "cutBang", "fcutBang"].iter().any(|k| counts(&out, k) < per_kind) && round < 40 {
        let corpus = corpus_with(seed.wrapping_add(round * 7_919), 120, 6, 0.5);
        round += 1;
        for d in &corpus {
            let push = |kind: &'static str, c: Option<Derivation>, out: &mut Vec<CutInstance>| {
                if let Some(c) = c {
                    let flexible = CheckOptions { mode: Mode::Strict, flexible_root: true };
                    if counts(out, kind) < per_kind && check_with(&c, flexible).is_ok() {
                        out.push(CutInstance { kind, derivation: c });
                    }
                }
            };
            if let Some(fi) = focus_indices(d).choose(&mut rng).copied() {
                let c = linear_cut(&mut rng, d, fi);
                push("cut", c, &mut out);
            }
            if d.conclusion.is_focused() {
                let c = focused_cut(&mut rng, d);
                push("fcut", c, &mut out);
            }
            if !d.conclusion.per().is_empty() || d.conclusion.is_focused() || rng.gen_bool(0.3) {
                let c = persistent_cut(&mut rng, d);
                let kind = if d.conclusion.is_focused() { "fcutBang" } else { "cutBang" };
                push(kind, c, &mut out);
            }
        }
    }
    out
}

/// Nests a cut instance under another when the shapes allow it, so that
/// some inputs carry more than one cut.
pub fn nested(a: &Derivation, b: &Derivation) -> Option<Derivation> {
    let FocItem::Focus(p) = a.conclusion.foc_ctx()?.iter().find(|i| i.is_focus())?.clone() else { return None };
    let ctx = b.conclusion.inv_ctx()?;
    if ctx.contains(&p.dual()) && a.conclusion.per() == b.conclusion.per() {
        Derivation::cut(a.clone(), b.clone(), &p).ok()
    } else {
        None
    }
}
