//! Bounded exhaustive proof search: the rules read bottom-up.

use crate::kernel::{Derivation, FocItem, NegCtx, PosCtx, Sequent};
use crate::syntax::{Neg, Pos};
use std::collections::{HashMap, HashSet};
use std::rc::Rc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum derivation height.
    pub depth: usize,
    /// Maximum number of derivations kept per sequent.
    pub limit: usize,
    /// Maximum copies of one persistent formula per decide.
    pub copy_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { depth: 8, limit: 10_000, copy_cap: 2 }
    }
}

impl SearchBudget {
    pub fn depth(depth: usize) -> Self {
        SearchBudget { depth, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("focused sequent without foci: {0}")]
    NotViable(Sequent),
}

#[derive(Clone, Debug)]
pub struct ProveOutcome {
    pub proof: Option<Derivation>,
    /// Some branch was cut off by the depth bound.
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub proofs: Vec<Derivation>,
    /// Some list was cut at `limit`, so the result may be incomplete.
    pub limit_hit: bool,
}

/// The first derivation of `s` within the budget, if any.
pub fn prove(s: &Sequent, b: SearchBudget) -> Option<Derivation> {
    prove_outcome(s, b).proof
}

pub fn prove_outcome(s: &Sequent, b: SearchBudget) -> ProveOutcome {
    if !s.is_focus_viable() {
        return ProveOutcome { proof: None, truncated: false };
    }
    let mut st = Searcher::new(b);
    let (proof, truncated) = st.first(s, b.depth);
    ProveOutcome { proof, truncated }
}

/// Every derivation of `s` of height at most `b.depth`, up to `b.limit`.
pub fn enumerate(s: &Sequent, b: SearchBudget) -> Result<Vec<Derivation>, SearchError> {
    enumerate_status(s, b).map(|e| e.proofs)
}

pub fn enumerate_status(s: &Sequent, b: SearchBudget) -> Result<Enumeration, SearchError> {
    if !s.is_focus_viable() {
        return Err(SearchError::NotViable(s.clone()));
    }
    let mut st = Searcher::new(b);
    let all = st.all(s, b.depth);
    let mut seen = HashSet::new();
    let proofs: Vec<Derivation> = all.iter().filter(|d| seen.insert(*d)).take(b.limit).cloned().collect();
    Ok(Enumeration { proofs, limit_hit: st.limit_hit })
}

#[derive(Clone, Debug)]
enum Step {
    Ax(String),
    One,
    Bang,
    Release(NegCtx),
    Tensor(Pos, Pos),
    PlusL(Pos, Pos),
    PlusR(Pos, Pos),
    Top,
    Bot,
    Par(Neg, Neg),
    With(Neg, Neg),
    Quest(Pos),
    Decide(PosCtx),
}

struct Expansion {
    step: Step,
    premises: Vec<Sequent>,
}

fn build(step: &Step, s: &Sequent, mut ps: Vec<Derivation>) -> Derivation {
    let per = s.per().clone();
    let built = match step {
        Step::Ax(a) => Ok(Derivation::ax(per, a)),
        Step::One => Ok(Derivation::one(per)),
        Step::Top => Derivation::top(per, s.inv_ctx().expect("inversion").clone()),
        Step::Bang => Derivation::bang(ps.remove(0)),
        Step::Release(delta) => Derivation::release(ps.remove(0), delta),
        Step::Tensor(l, r) => {
            let right = ps.pop().expect("two premises");
            Derivation::tensor(ps.remove(0), right, l, r)
        }
        Step::PlusL(l, r) => Derivation::plus_l(ps.remove(0), l, r.clone()),
        Step::PlusR(l, r) => Derivation::plus_r(ps.remove(0), l.clone(), r),
        Step::Bot => Derivation::bot(ps.remove(0)),
        Step::Par(n, m) => Derivation::par(ps.remove(0), n, m),
        Step::With(n, m) => {
            let right = ps.pop().expect("two premises");
            Derivation::with(ps.remove(0), right, n, m)
        }
        Step::Quest(p) => Derivation::quest(ps.remove(0), p),
        Step::Decide(copies) => Derivation::decide(ps.remove(0), copies),
    };
    let d = built.expect("search only builds rule instances");
    debug_assert_eq!(&d.conclusion, s);
    d
}

/// All copy selections with at most `cap` copies of each distinct member.
fn copy_selections(per: &PosCtx, cap: usize) -> Vec<PosCtx> {
    let mut out: Vec<Vec<Pos>> = vec![Vec::new()];
    for p in per.distinct() {
        let mut next = Vec::new();
        for base in &out {
            for k in 0..=cap {
                let mut v = base.clone();
                v.extend(std::iter::repeat_n(p.clone(), k));
                next.push(v);
            }
        }
        out = next;
    }
    out.into_iter().map(PosCtx::from).collect()
}

fn expansions(s: &Sequent, copy_cap: usize) -> Vec<Expansion> {
    let mut out = Vec::new();
    let per = s.per().clone();
    match s {
        Sequent::Foc { ctx, .. } => {
            let items = ctx.as_slice();
            match items {
                [FocItem::Passive(Neg::NAtom(a)), FocItem::Focus(Pos::Atom(b))] if a == b => {
                    out.push(Expansion { step: Step::Ax(a.as_str().to_string()), premises: vec![] })
                }
                [FocItem::Focus(Pos::One)] => out.push(Expansion { step: Step::One, premises: vec![] }),
                [FocItem::Focus(Pos::Bang(n))] => out.push(Expansion {
                    step: Step::Bang,
                    premises: vec![Sequent::inv(per.clone(), NegCtx::singleton((**n).clone()))],
                }),
                _ => {}
            }
            let foci: Vec<&Pos> = items.iter().filter_map(FocItem::as_focus).collect();
            if !foci.is_empty() && foci.iter().all(|p| matches!(p, Pos::Up(_))) {
                let mut delta = NegCtx::new();
                let mut gamma = NegCtx::new();
                for i in items {
                    match i {
                        FocItem::Focus(Pos::Up(n)) => delta.insert((**n).clone()),
                        FocItem::Passive(n) => gamma.insert(n.clone()),
                        FocItem::Focus(_) => unreachable!(),
                    }
                }
                out.push(Expansion {
                    premises: vec![Sequent::inv(per.clone(), gamma.union(&delta))],
                    step: Step::Release(delta),
                });
            }
            for item in ctx.distinct() {
                let FocItem::Focus(q) = item else { continue };
                let rest = ctx.without(item).expect("member");
                match q {
                    Pos::Tensor(l, r) => {
                        for left in rest.submultisets() {
                            let right = rest.difference(&left).expect("submultiset");
                            out.push(Expansion {
                                step: Step::Tensor((**l).clone(), (**r).clone()),
                                premises: vec![
                                    Sequent::foc(per.clone(), left.with(FocItem::Focus((**l).clone()))),
                                    Sequent::foc(per.clone(), right.with(FocItem::Focus((**r).clone()))),
                                ],
                            });
                        }
                    }
                    Pos::Plus(l, r) => {
                        out.push(Expansion {
                            step: Step::PlusL((**l).clone(), (**r).clone()),
                            premises: vec![Sequent::foc(per.clone(), rest.clone().with(FocItem::Focus((**l).clone())))],
                        });
                        out.push(Expansion {
                            step: Step::PlusR((**l).clone(), (**r).clone()),
                            premises: vec![Sequent::foc(per.clone(), rest.with(FocItem::Focus((**r).clone())))],
                        });
                    }
                    _ => {}
                }
            }
        }
        Sequent::Inv { ctx, .. } => {
            if ctx.contains(&Neg::Top) {
                out.push(Expansion { step: Step::Top, premises: vec![] });
            }
            for n in ctx.distinct() {
                let rest = ctx.without(n).expect("member");
                match n {
                    Neg::Bot => {
                        out.push(Expansion { step: Step::Bot, premises: vec![Sequent::inv(per.clone(), rest)] })
                    }
                    Neg::Par(a, b) => out.push(Expansion {
                        step: Step::Par((**a).clone(), (**b).clone()),
                        premises: vec![Sequent::inv(per.clone(), rest.with((**a).clone()).with((**b).clone()))],
                    }),
                    Neg::With(a, b) => out.push(Expansion {
                        step: Step::With((**a).clone(), (**b).clone()),
                        premises: vec![
                            Sequent::inv(per.clone(), rest.clone().with((**a).clone())),
                            Sequent::inv(per.clone(), rest.with((**b).clone())),
                        ],
                    }),
                    Neg::Quest(p) => out.push(Expansion {
                        step: Step::Quest((**p).clone()),
                        premises: vec![Sequent::inv(per.clone().with((**p).clone()), rest)],
                    }),
                    _ => {}
                }
            }
            let downs: PosCtx = ctx
                .iter()
                .filter_map(|n| match n {
                    Neg::Down(p) => Some((**p).clone()),
                    _ => None,
                })
                .collect::<Vec<_>>()
                .into();
            let copies = copy_selections(&per, copy_cap);
            for theta in downs.submultisets() {
                let gamma = ctx.difference(&theta.map(|p| Neg::down(p.clone()))).expect("chosen downshifts");
                for cs in &copies {
                    if theta.is_empty() && cs.is_empty() {
                        continue;
                    }
                    let foci = crate::kernel::foci(&cs.union(&theta));
                    out.push(Expansion {
                        step: Step::Decide(cs.clone()),
                        premises: vec![Sequent::foc(per.clone(), crate::kernel::passives(&gamma).union(&foci))],
                    });
                }
            }
        }
    }
    out
}

type Memo<T> = HashMap<(Sequent, usize), T>;

struct Searcher {
    budget: SearchBudget,
    all_memo: Memo<Rc<Vec<Derivation>>>,
    first_memo: Memo<(Option<Derivation>, bool)>,
    limit_hit: bool,
}

impl Searcher {
    fn new(budget: SearchBudget) -> Self {
        Searcher { budget, all_memo: HashMap::new(), first_memo: HashMap::new(), limit_hit: false }
    }

    fn first(&mut self, s: &Sequent, depth: usize) -> (Option<Derivation>, bool) {
        let key = (s.clone(), depth);
        if let Some(r) = self.first_memo.get(&key) {
            return r.clone();
        }
        let exps = expansions(s, self.budget.copy_cap);
        let mut truncated = false;
        let mut found = None;
        if depth == 0 {
            truncated = !exps.is_empty();
        } else {
            'exp: for e in &exps {
                let mut ps = Vec::with_capacity(e.premises.len());
                for p in &e.premises {
                    let (d, t) = self.first(p, depth - 1);
                    truncated |= t;
                    match d {
                        Some(d) => ps.push(d),
                        None => continue 'exp,
                    }
                }
                found = Some(build(&e.step, s, ps));
                break;
            }
        }
        let r = (found, truncated);
        self.first_memo.insert(key, r.clone());
        r
    }

    fn all(&mut self, s: &Sequent, depth: usize) -> Rc<Vec<Derivation>> {
        let key = (s.clone(), depth);
        if let Some(r) = self.all_memo.get(&key) {
            return r.clone();
        }
        let mut out = Vec::new();
        if depth > 0 {
            let limit = self.budget.limit;
            'exp: for e in expansions(s, self.budget.copy_cap) {
                let lists: Vec<Rc<Vec<Derivation>>> = e.premises.iter().map(|p| self.all(p, depth - 1)).collect();
                if lists.iter().any(|l| l.is_empty()) {
                    continue;
                }
                let mut idx = vec![0usize; lists.len()];
                loop {
                    if out.len() >= limit {
                        self.limit_hit = true;
                        break 'exp;
                    }
                    let ps = idx.iter().zip(&lists).map(|(&i, l)| l[i].clone()).collect();
                    out.push(build(&e.step, s, ps));
                    // Odometer over the premise lists, last premise fastest.
                    let mut k = idx.len();
                    loop {
                        if k == 0 {
                            continue 'exp;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < lists[k].len() {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
            }
        }
        let r = Rc::new(out);
        self.all_memo.insert(key, r.clone());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::kernel::{check, Mode};

    fn inv(ctx: Vec<Neg>) -> Sequent {
        Sequent::inv(PosCtx::new(), ctx.into())
    }

    #[test]
    fn decide_then_axiom() {
        let s = inv(vec![Neg::natom("a"), Neg::down(Pos::atom("a"))]);
        let d = prove(&s, SearchBudget::depth(3)).unwrap();
        assert_eq!(d.size(), 2);
        assert!(check(&d, Mode::Strict).is_ok());
    }

    #[test]
    fn lone_negative_atom_is_unprovable() {
        let s = inv(vec![Neg::natom("a")]);
        let r = prove_outcome(&s, SearchBudget::depth(6));
        assert!(r.proof.is_none());
        assert!(!r.truncated);
    }

    #[test]
    fn example1_endsequent() {
        let e = corpus::example1();
        let d = prove(&e.conclusion, SearchBudget::depth(8)).unwrap();
        assert!(check(&d, Mode::Strict).is_ok());
        let all = enumerate(&e.conclusion, SearchBudget { depth: 8, limit: 10_000, copy_cap: 2 }).unwrap();
        assert!(all.contains(&e));
        assert!(all.contains(&d));
        assert!(all.iter().all(|x| check(x, Mode::Strict).is_ok()));
    }

    #[test]
    fn only_ax_for_atomic_focus() {
        let ax = Derivation::ax(PosCtx::new(), "a");
        assert_eq!(enumerate(&ax.conclusion, SearchBudget::depth(1)).unwrap(), vec![ax]);
    }

    #[test]
    fn focus_free_is_rejected() {
        let s = Sequent::foc(
            PosCtx::new(),
            vec![FocItem::Passive(Neg::natom("a")), FocItem::Passive(Neg::natom("b"))].into(),
        );
        assert!(enumerate(&s, SearchBudget::default()).is_err());
    }

    #[test]
    fn copies_are_capped() {
        let per = PosCtx::singleton(Pos::One);
        assert_eq!(copy_selections(&per, 2).len(), 3);
    }
}
