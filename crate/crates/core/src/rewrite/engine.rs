use super::decompose::decompose_at;
use super::lower::lower_at;
use super::RewriteError;
use crate::kernel::{
    check_with, has_focus, render_path, CheckOptions, Derivation, FocItem, Mode, NegCtx, Path, Rule, RuleName, Sequent,
};
use crate::syntax::{Neg, Pos};
use serde::Serialize;
use std::fmt;

/// Termination measure of a cut node, compared lexicographically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CutMeasure {
    pub formula_size: usize,
    /// 1 for persistent cuts, 0 for linear ones.
    pub kind_rank: usize,
    /// Sum of the sizes of the premises.
    pub weight: usize,
}

impl CutMeasure {
    /// `None` for nodes that are not cuts.
    pub fn of(d: &Derivation) -> Option<CutMeasure> {
        let p = d.rule.cut_formula()?;
        let kind_rank = usize::from(matches!(d.name(), RuleName::CutBang | RuleName::FcutBang));
        let weight = d.premises.iter().map(Derivation::size).sum();
        Some(CutMeasure { formula_size: p.size(), kind_rank, weight })
    }
}

impl fmt::Display for CutMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.formula_size, self.kind_rank, self.weight)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: String,
    pub path: Path,
    pub before: CutMeasure,
    /// Largest measure among the cuts left in the rewritten subtree, or
    /// all zeros when none is left.
    pub after: CutMeasure,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Derivation>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step={} path={} measure={} -> {}", self.step, render_path(&self.path), self.before, self.after)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
    /// Set when a focused conclusion without foci came back as the
    /// corresponding inversion sequent.
    pub coerced: bool,
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        if self.coerced {
            writeln!(f, "coerced: focus-free focused conclusion delivered as an inversion sequent")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Flavor {
    Strict,
    #[default]
    Flexible,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NormalizeOptions {
    pub flavor: Flavor,
    /// Re-check the whole derivation after every step.
    pub paranoid: bool,
    /// Keep a snapshot of the derivation after every step.
    pub trace: bool,
}

type Step = (Derivation, String);

fn is_focus_free_foc(s: &Sequent) -> bool {
    matches!(s, Sequent::Foc { ctx, .. } if !has_focus(ctx))
}

/// Rewrites the cut at the root of `d` into strictly smaller cuts.
pub fn reduce_step(d: &Derivation, flavor: Flavor) -> Result<Derivation, RewriteError> {
    reduce_named(d, flavor).map(|(d, _)| d)
}

fn reduce_named(d: &Derivation, flavor: Flavor) -> Result<Step, RewriteError> {
    if !d.name().is_cut() {
        return Err(RewriteError::InvalidInput(format!("root is a {} node, not a cut", d.name())));
    }
    if !d.premises.iter().all(Derivation::is_cut_free) {
        return Err(RewriteError::InvalidInput("premises of the reduced cut must be cut-free".into()));
    }
    if is_focus_free_foc(&d.conclusion) && flavor == Flavor::Strict {
        return Err(RewriteError::IllFormedCut { path: Vec::new() });
    }
    let [dd, e] = d.premises.as_slice() else {
        return Err(RewriteError::stuck("cut without two premises"));
    };
    let (out, step) = match &d.rule {
        Rule::Cut { formula, .. } => cut(dd, e, formula)?,
        Rule::Fcut { formula, .. } => fcut(dd, e, formula)?,
        Rule::CutBang { formula } | Rule::FcutBang { formula } => persistent(dd, e, formula)?,
        Rule::Acut { .. } => return Err(RewriteError::Unsupported { path: Vec::new(), rule: RuleName::Acut }),
        _ => unreachable!("cut rules only"),
    };
    Ok((out, format!("{}:{}", d.name(), step)))
}

fn spent_foci(sigma: &[FocItem]) -> NegCtx {
    sigma
        .iter()
        .filter_map(|i| match i {
            FocItem::Focus(Pos::Up(n)) => Some((**n).clone()),
            _ => None,
        })
        .collect::<Vec<_>>()
        .into()
}

/// `D ⊨ Ψ,[P]` against `E ⊢ Γ,P^⊥`: decompose, lower, cut, release and
/// replay the suffix.
fn cut(d: &Derivation, e: &Derivation, p: &Pos) -> Result<Step, RewriteError> {
    let dec = decompose_at(d, p)?;
    let lowered = lower_at(&dec.core, p)?;
    let (inner, step) = linear(&lowered, e, p)?;
    if !has_focus(&dec.sigma) {
        if !dec.suffix.is_empty() {
            return Err(RewriteError::stuck("non-empty suffix over a focus-free core"));
        }
        return Ok((inner, step.to_string()));
    }
    let released = Derivation::release(inner, &spent_foci(dec.sigma.as_slice()))?;
    Ok((dec.suffix.replay(released)?, step.to_string()))
}

fn focus_free_part(d: &Derivation, p: &Pos) -> NegCtx {
    let ctx = d.conclusion.foc_ctx().expect("focused premise");
    let rest = ctx.without(&FocItem::Focus(p.clone())).expect("cut focus");
    crate::kernel::as_neg_ctx(&rest).expect("only the cut focus")
}

/// Cut of `D ⊨ Γ₁,[P]` (no other focus) against `E ⊢ Γ,P^⊥`, concluding
/// `⊢ Γ₁,Γ`. Cases follow the last rule of `E`.
fn linear(d: &Derivation, e: &Derivation, p: &Pos) -> Result<(Derivation, &'static str), RewriteError> {
    let pd = p.dual();
    if let Pos::Atom(_) = p {
        return Ok((e.clone(), "ax"));
    }
    let per = e.conclusion.per().clone();
    Ok(match (&e.rule, e.premises.as_slice()) {
        (Rule::Top, []) => {
            let gamma = e.conclusion.inv_ctx().expect("inversion").without(&pd).expect("cut formula");
            (Derivation::top(per, focus_free_part(d, p).union(&gamma))?, "top")
        }
        (Rule::Bot, [e1]) => {
            if p == &Pos::One {
                (e1.clone(), "one-bot")
            } else {
                (Derivation::bot(Derivation::cut(d.clone(), e1.clone(), p)?)?, "bot-commute")
            }
        }
        (Rule::Par { principal }, [e1]) => {
            let Neg::Par(n, m) = principal else { unreachable!() };
            if principal == &pd {
                let (Pos::Tensor(q, r), [d1, d2]) = (p, d.premises.as_slice()) else {
                    return Err(RewriteError::stuck("tensor/par: first premise is not a tensor"));
                };
                let first = Derivation::cut(d1.clone(), e1.clone(), q)?;
                (Derivation::cut(d2.clone(), first, r)?, "tensor-par")
            } else {
                (Derivation::par(Derivation::cut(d.clone(), e1.clone(), p)?, n, m)?, "par-commute")
            }
        }
        (Rule::With { principal }, [e1, e2]) => {
            let Neg::With(n, m) = principal else { unreachable!() };
            if principal == &pd {
                let (Pos::Plus(a, b), [d1]) = (p, d.premises.as_slice()) else {
                    return Err(RewriteError::stuck("plus/with: first premise is not a plus"));
                };
                match d.rule {
                    Rule::PlusL { .. } => (Derivation::cut(d1.clone(), e1.clone(), a)?, "plus-with"),
                    Rule::PlusR { .. } => (Derivation::cut(d1.clone(), e2.clone(), b)?, "plus-with"),
                    _ => return Err(RewriteError::stuck("plus/with: first premise is not a plus")),
                }
            } else {
                let l = Derivation::cut(d.clone(), e1.clone(), p)?;
                let r = Derivation::cut(d.clone(), e2.clone(), p)?;
                (Derivation::with(l, r, n, m)?, "with-commute")
            }
        }
        (Rule::Quest { principal }, [e1]) => {
            let Neg::Quest(x) = principal else { unreachable!() };
            if principal == &pd {
                let (Rule::Bang, [d1]) = (&d.rule, d.premises.as_slice()) else {
                    return Err(RewriteError::stuck("bang/quest: first premise is not a bang"));
                };
                (Derivation::cut_bang(d1.clone(), e1.clone(), x)?, "bang-quest")
            } else {
                (Derivation::quest(Derivation::cut(d.weaken(x), e1.clone(), p)?, x)?, "quest-commute")
            }
        }
        (Rule::Decide { copies, theta }, [e1]) => match &pd {
            Neg::Down(x) if theta.contains(x) => {
                let (Rule::Release, [d1]) = (&d.rule, d.premises.as_slice()) else {
                    return Err(RewriteError::stuck("release/decide: first premise is not a release"));
                };
                let swapped = Derivation::cut(e1.clone(), d1.clone(), x)?;
                if swapped.conclusion.is_focused() {
                    (Derivation::decide(swapped, copies)?, "release-decide")
                } else {
                    (swapped, "release-decide")
                }
            }
            _ => (Derivation::decide(Derivation::fcut(d.clone(), e1.clone(), p)?, copies)?, "decide-commute"),
        },
        _ => return Err(RewriteError::stuck(format!("no linear case for {} against {}", d.name(), e.name()))),
    })
}

/// `D ⊨ Ψ,[P]` against `E ⊨ Ξ,P^⊥` with `P^⊥` passive.
fn fcut(d: &Derivation, e: &Derivation, p: &Pos) -> Result<Step, RewriteError> {
    let dec = decompose_at(d, p)?;
    let (inner, step) = focused(&dec.core, dec.sigma.as_slice(), e, p)?;
    Ok((dec.suffix.replay(inner)?, step.to_string()))
}

/// The spent core `D ⊨ Σ,[P]` against `E ⊨ Ξ,P^⊥`, concluding `⊨ Σ,Ξ`.
fn focused(
    core: &Derivation,
    sigma: &[FocItem],
    e: &Derivation,
    p: &Pos,
) -> Result<(Derivation, &'static str), RewriteError> {
    let held = FocItem::Passive(p.dual());
    Ok(match (&e.rule, e.premises.as_slice()) {
        (Rule::Ax, []) => (core.clone(), "ax"),
        (Rule::Tensor { principal, left }, [e1, e2]) => {
            let Pos::Tensor(l, r) = principal else { unreachable!() };
            if left.contains(&held) {
                (
                    Derivation::tensor(Derivation::fcut(core.clone(), e1.clone(), p)?, e2.clone(), l, r)?,
                    "tensor-commute",
                )
            } else {
                (
                    Derivation::tensor(e1.clone(), Derivation::fcut(core.clone(), e2.clone(), p)?, l, r)?,
                    "tensor-commute",
                )
            }
        }
        (Rule::PlusL { principal }, [e1]) => {
            let Pos::Plus(l, r) = principal else { unreachable!() };
            (Derivation::plus_l(Derivation::fcut(core.clone(), e1.clone(), p)?, l, (**r).clone())?, "plus-commute")
        }
        (Rule::PlusR { principal }, [e1]) => {
            let Pos::Plus(l, r) = principal else { unreachable!() };
            (Derivation::plus_r(Derivation::fcut(core.clone(), e1.clone(), p)?, (**l).clone(), r)?, "plus-commute")
        }
        (Rule::Release, [e1]) => {
            let lowered = lower_at(core, p)?;
            let inner = Derivation::cut(lowered, e1.clone(), p)?;
            let e_foci = e.conclusion.foc_ctx().expect("focused");
            let delta = spent_foci(e_foci.as_slice()).union(&spent_foci(sigma));
            (Derivation::release(inner, &delta)?, "release")
        }
        _ => return Err(RewriteError::stuck(format!("no focused case for {} against {}", core.name(), e.name()))),
    })
}

/// `D ⊢ Per : P^⊥` against `E` with `P` in its persistent context.
fn persistent(d: &Derivation, e: &Derivation, p: &Pos) -> Result<Step, RewriteError> {
    let bang = |d: &Derivation, e: &Derivation| -> Result<Derivation, RewriteError> {
        Ok(if e.conclusion.is_focused() {
            Derivation::fcut_bang(d.clone(), e.clone(), p)?
        } else {
            Derivation::cut_bang(d.clone(), e.clone(), p)?
        })
    };
    let mut per = e.conclusion.per().clone();
    per.remove(p);
    let out = match (&e.rule, e.premises.as_slice()) {
        (Rule::Ax, []) => {
            let Some(FocItem::Focus(Pos::Atom(a))) =
                e.conclusion.foc_ctx().and_then(|c| c.iter().find(|i| i.is_focus()))
            else {
                return Err(RewriteError::stuck("malformed axiom"));
            };
            Derivation::ax(per, a.as_str())
        }
        (Rule::One, []) => Derivation::one(per),
        (Rule::Top, []) => Derivation::top(per, e.conclusion.inv_ctx().expect("inversion").clone())?,
        (Rule::Tensor { principal: Pos::Tensor(l, r), .. }, [e1, e2]) => {
            Derivation::tensor(bang(d, e1)?, bang(d, e2)?, l, r)?
        }
        (Rule::PlusL { principal: Pos::Plus(l, r) }, [e1]) => Derivation::plus_l(bang(d, e1)?, l, (**r).clone())?,
        (Rule::PlusR { principal: Pos::Plus(l, r) }, [e1]) => Derivation::plus_r(bang(d, e1)?, (**l).clone(), r)?,
        (Rule::Bang, [e1]) => Derivation::bang(bang(d, e1)?)?,
        (Rule::Release, [e1]) => {
            let delta = spent_foci(e.conclusion.foc_ctx().expect("focused").as_slice());
            Derivation::release(bang(d, e1)?, &delta)?
        }
        (Rule::Bot, [e1]) => Derivation::bot(bang(d, e1)?)?,
        (Rule::Par { principal: Neg::Par(n, m) }, [e1]) => Derivation::par(bang(d, e1)?, n, m)?,
        (Rule::With { principal: Neg::With(n, m) }, [e1, e2]) => Derivation::with(bang(d, e1)?, bang(d, e2)?, n, m)?,
        (Rule::Quest { principal: Neg::Quest(x) }, [e1]) => Derivation::quest(bang(&d.weaken(x), e1)?, x)?,
        (Rule::Decide { copies, .. }, [e1]) => {
            let inner = bang(d, e1)?;
            let k = copies.count(p);
            if k == 0 || per.contains(p) {
                Derivation::decide(inner, copies)?
            } else {
                // The copies of P lose their source: cut each against D.
                let mut acc = inner;
                for _ in 0..k {
                    acc = Derivation::cut(acc, d.clone(), p)?;
                }
                let rest: crate::kernel::PosCtx = copies.iter().filter(|c| *c != p).cloned().collect::<Vec<_>>().into();
                if acc.conclusion.is_focused() {
                    Derivation::decide(acc, &rest)?
                } else {
                    acc
                }
            }
        }
        _ => return Err(RewriteError::stuck(format!("no persistent case against {}", e.name()))),
    };
    Ok((out, e.name().as_str().to_string()))
}

fn first_cut(d: &Derivation) -> Option<Path> {
    fn go(d: &Derivation, path: &mut Path) -> bool {
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            if go(p, path) {
                return true;
            }
            path.pop();
        }
        d.name().is_cut()
    }
    let mut path = Vec::new();
    go(d, &mut path).then_some(path)
}

fn residual_max(d: &Derivation) -> CutMeasure {
    let mut best = CutMeasure::default();
    d.visit(&mut |_, n| {
        if let Some(m) = CutMeasure::of(n) {
            best = best.max(m);
        }
    });
    best
}

const STEP_LIMIT: usize = 1_000_000;

/// Eliminates every cut of `d`, innermost first.
pub fn normalize(d: &Derivation, opts: NormalizeOptions) -> Result<(Derivation, ReductionTrace), RewriteError> {
    let check_opts = CheckOptions { mode: Mode::Experimental, flexible_root: true };
    let report = check_with(d, check_opts);
    if !report.is_ok() {
        return Err(RewriteError::InvalidInput(format!("derivation does not check:\n{report}")));
    }
    if opts.flavor == Flavor::Strict && d.name().is_cut() && is_focus_free_foc(&d.conclusion) {
        return Err(RewriteError::IllFormedCut { path: Vec::new() });
    }
    let mut cur = d.clone();
    let mut trace = ReductionTrace::default();
    while let Some(path) = first_cut(&cur) {
        if trace.steps.len() >= STEP_LIMIT {
            return Err(RewriteError::stuck("step limit reached").at(&path));
        }
        let node = cur.at(&path).expect("path from traversal");
        let before = CutMeasure::of(node).expect("cut node");
        let (out, step) = reduce_named(node, opts.flavor).map_err(|e| e.at(&path))?;
        let mut residual_error = None;
        out.visit(&mut |_, n| {
            if let Some(m) = CutMeasure::of(n) {
                if m >= before && residual_error.is_none() {
                    residual_error = Some(format!("{step}: residual measure {m} does not decrease from {before}"));
                }
            }
        });
        if let Some(msg) = residual_error {
            return Err(RewriteError::stuck(msg).at(&path));
        }
        if out.conclusion != node.conclusion {
            let coercible = path.is_empty() && node.conclusion.coerce_to_inv().as_ref() == Some(&out.conclusion);
            if !coercible {
                return Err(RewriteError::stuck(format!("{step} changed the conclusion")).at(&path));
            }
            trace.coerced = true;
        }
        let after = residual_max(&out);
        *cur.at_mut(&path).expect("path from traversal") = out;
        if opts.paranoid {
            let report = check_with(&cur, check_opts);
            if !report.is_ok() {
                return Err(RewriteError::Paranoid { path, report });
            }
        }
        let snapshot = opts.trace.then(|| cur.clone());
        trace.steps.push(TraceStep { step, path, before, after, snapshot });
    }
    Ok((cur, trace))
}
