//! Local rule checking.
//!
//! [`schema`] reads a rule instance bottom-up: from the conclusion and the
//! recorded rule data it computes the premise sequents, and collects every
//! side condition that fails along the way. The checker compares those
//! premises with the stored ones; the proof-file reader uses the same
//! function to rebuild premise sequents from the root.

use super::derivation::{render_path, Derivation, Path, Rule, RuleName};
use super::sequent::{activates_to, foci, has_focus, passives, FocCtx, FocItem, NegCtx, Sequent};
use crate::syntax::{Neg, Pos};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Strict,
    /// Also admits the activating cut.
    Experimental,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CheckOptions {
    pub mode: Mode,
    /// Accept a root linear cut whose focused conclusion has no focus; the
    /// engine delivers the matching inversion sequent for it.
    pub flexible_root: bool,
}

impl From<Mode> for CheckOptions {
    fn from(mode: Mode) -> Self {
        CheckOptions { mode, flexible_root: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: Path,
    pub rule: RuleName,
    pub clause: String,
}

impl Violation {
    /// `<rule>: <clause>`.
    pub fn message(&self) -> String {
        format!("{}: {}", self.rule, self.clause)
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", render_path(&self.path), self.rule, self.clause)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, message: &str) -> bool {
        self.violations.iter().any(|v| v.message() == message)
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Result of reading one rule instance bottom-up.
#[derive(Debug, Default)]
pub struct Schema {
    /// Failed clauses.
    pub clauses: Vec<String>,
    /// Premise sequents, when they can be computed at all.
    pub premises: Option<Vec<Sequent>>,
}

struct SchemaBuilder {
    clauses: Vec<String>,
}

impl SchemaBuilder {
    fn require(&mut self, ok: bool, clause: &str) {
        if !ok {
            self.clauses.push(clause.to_string());
        }
    }

    fn done(self, premises: Vec<Sequent>) -> Schema {
        Schema { clauses: self.clauses, premises: Some(premises) }
    }

    fn stuck(mut self, clause: &str) -> Schema {
        self.clauses.push(clause.to_string());
        Schema { clauses: self.clauses, premises: None }
    }
}

fn remove_focus(ctx: &FocCtx, p: &Pos) -> Option<FocCtx> {
    ctx.without(&FocItem::Focus(p.clone()))
}

/// Computes premises and failed clauses for `rule` concluding `concl`.
pub fn schema(rule: &Rule, concl: &Sequent, opts: CheckOptions, is_root: bool) -> Schema {
    let mut b = SchemaBuilder { clauses: Vec::new() };
    let per = concl.per().clone();
    match (rule, concl) {
        (Rule::Ax, Sequent::Foc { ctx, .. }) => {
            match ctx.as_slice() {
                [FocItem::Passive(Neg::NAtom(x)), FocItem::Focus(Pos::Atom(y))] => {
                    b.require(x == y, "atom mismatch");
                }
                _ => b.require(false, "context must be exactly a^⊥ and [a]"),
            }
            b.done(vec![])
        }
        (Rule::One, Sequent::Foc { ctx, .. }) => {
            b.require(ctx.as_slice() == [FocItem::Focus(Pos::One)], "context must be exactly [1]");
            b.done(vec![])
        }
        (Rule::Tensor { principal, left }, Sequent::Foc { ctx, .. }) => {
            let Pos::Tensor(p, q) = principal else {
                return b.stuck("principal formula is not a tensor");
            };
            let Some(rest) = remove_focus(ctx, principal) else {
                return b.stuck("principal focus not in conclusion");
            };
            let Some(right) = rest.difference(left) else {
                return b.stuck("left partition not in conclusion");
            };
            b.done(vec![
                Sequent::foc(per.clone(), left.clone().with(FocItem::Focus((**p).clone()))),
                Sequent::foc(per, right.with(FocItem::Focus((**q).clone()))),
            ])
        }
        (Rule::PlusL { principal } | Rule::PlusR { principal }, Sequent::Foc { ctx, .. }) => {
            let Pos::Plus(p, q) = principal else {
                return b.stuck("principal formula is not a plus");
            };
            let Some(rest) = remove_focus(ctx, principal) else {
                return b.stuck("principal focus not in conclusion");
            };
            let chosen = if matches!(rule, Rule::PlusL { .. }) { p } else { q };
            b.done(vec![Sequent::foc(per, rest.with(FocItem::Focus((**chosen).clone())))])
        }
        (Rule::Bang, Sequent::Foc { ctx, .. }) => match ctx.as_slice() {
            [FocItem::Focus(Pos::Bang(n))] => b.done(vec![Sequent::inv(per, NegCtx::singleton((**n).clone()))]),
            _ => b.stuck("context must be exactly [!N]"),
        },
        (Rule::Release, Sequent::Foc { ctx, .. }) => {
            let mut gamma = NegCtx::new();
            let mut delta = NegCtx::new();
            let mut other_foci = false;
            for item in ctx {
                match item {
                    FocItem::Passive(n) => gamma.insert(n.clone()),
                    FocItem::Focus(Pos::Up(n)) => delta.insert((**n).clone()),
                    FocItem::Focus(_) => other_foci = true,
                }
            }
            b.require(!delta.is_empty(), "Δ must be non-empty");
            b.require(!other_foci, "no other foci may be present");
            b.done(vec![Sequent::inv(per, gamma.union(&delta))])
        }
        (Rule::Bot, Sequent::Inv { ctx, .. }) => match ctx.without(&Neg::Bot) {
            Some(rest) => b.done(vec![Sequent::inv(per, rest)]),
            None => b.stuck("no ⊥ in conclusion"),
        },
        (Rule::Par { principal }, Sequent::Inv { ctx, .. }) => {
            let Neg::Par(n, m) = principal else {
                return b.stuck("principal formula is not a par");
            };
            match ctx.without(principal) {
                Some(rest) => b.done(vec![Sequent::inv(per, rest.with((**n).clone()).with((**m).clone()))]),
                None => b.stuck("principal formula not in conclusion"),
            }
        }
        (Rule::Top, Sequent::Inv { ctx, .. }) => {
            b.require(ctx.contains(&Neg::Top), "no ⊤ in conclusion");
            b.done(vec![])
        }
        (Rule::With { principal }, Sequent::Inv { ctx, .. }) => {
            let Neg::With(n, m) = principal else {
                return b.stuck("principal formula is not a with");
            };
            match ctx.without(principal) {
                Some(rest) => b.done(vec![
                    Sequent::inv(per.clone(), rest.clone().with((**n).clone())),
                    Sequent::inv(per, rest.with((**m).clone())),
                ]),
                None => b.stuck("principal formula not in conclusion"),
            }
        }
        (Rule::Quest { principal }, Sequent::Inv { ctx, .. }) => {
            let Neg::Quest(p) = principal else {
                return b.stuck("principal formula is not a quest");
            };
            match ctx.without(principal) {
                Some(rest) => b.done(vec![Sequent::inv(per.with((**p).clone()), rest)]),
                None => b.stuck("principal formula not in conclusion"),
            }
        }
        (Rule::Decide { copies, theta }, Sequent::Inv { ctx, .. }) => {
            let downs: NegCtx = theta.map(|p| Neg::down(p.clone()));
            let Some(gamma) = ctx.difference(&downs) else {
                return b.stuck("Θ is not among the ⇓-formulas of the conclusion");
            };
            b.require(copies.iter().all(|c| per.contains(c)), "copies must come from Per");
            b.require(!(copies.is_empty() && theta.is_empty()), "Per^{vec n} or Θ must be non-empty");
            b.done(vec![Sequent::foc(per, foci(copies).union(&passives(&gamma)).union(&foci(theta)))])
        }
        (Rule::Cut { formula, left }, Sequent::Foc { ctx, .. }) => {
            let Some(gamma) = ctx.difference(left) else {
                return b.stuck("left partition not in conclusion");
            };
            let Some(gamma) = super::sequent::as_neg_ctx(&gamma) else {
                return b.stuck("second premise context must be focus-free");
            };
            if !has_focus(left) {
                b.require(opts.flexible_root && is_root, "conclusion must be focus-viable");
            }
            b.done(vec![
                Sequent::foc(per.clone(), left.clone().with(FocItem::Focus(formula.clone()))),
                Sequent::inv(per, gamma.with(formula.dual())),
            ])
        }
        (Rule::Cut { formula, left }, Sequent::Inv { ctx, .. }) => {
            let Some(psi) = super::sequent::as_neg_ctx(left) else {
                return b.stuck("inversion conclusion requires a focus-free Ψ");
            };
            let Some(gamma) = ctx.difference(&psi) else {
                return b.stuck("left partition not in conclusion");
            };
            b.done(vec![
                Sequent::foc(per.clone(), left.clone().with(FocItem::Focus(formula.clone()))),
                Sequent::inv(per, gamma.with(formula.dual())),
            ])
        }
        (Rule::Fcut { formula, left }, Sequent::Foc { ctx, .. }) => {
            let Some(xi) = ctx.difference(left) else {
                return b.stuck("left partition not in conclusion");
            };
            b.done(vec![
                Sequent::foc(per.clone(), left.clone().with(FocItem::Focus(formula.clone()))),
                Sequent::foc(per, xi.with(FocItem::Passive(formula.dual()))),
            ])
        }
        (Rule::CutBang { formula } | Rule::FcutBang { formula }, _) => {
            let focused = matches!(rule, Rule::FcutBang { .. });
            if concl.is_focused() != focused {
                return b.stuck("conclusion has the wrong judgment");
            }
            let mut second = concl.clone();
            second.per_mut().insert(formula.clone());
            b.done(vec![Sequent::inv(per, NegCtx::singleton(formula.dual())), second])
        }
        (Rule::Acut { formula, psi, gamma }, Sequent::Foc { ctx, .. }) => {
            b.require(opts.mode == Mode::Experimental, "only admitted in experimental mode");
            b.require(
                activates_to(&psi.union(&passives(gamma)), ctx),
                "activation witness does not match the conclusion",
            );
            b.done(vec![
                Sequent::foc(per.clone(), psi.clone().with(FocItem::Focus(formula.clone()))),
                Sequent::inv(per, gamma.clone().with(formula.dual())),
            ])
        }
        (_, Sequent::Inv { .. }) => b.stuck("conclusion must be a focused sequent"),
        (_, Sequent::Foc { .. }) => b.stuck("conclusion must be an inversion sequent"),
    }
}

/// Checks every node of `d` against its rule schema.
pub fn check(d: &Derivation, mode: Mode) -> ValidityReport {
    check_with(d, mode.into())
}

pub fn check_with(d: &Derivation, opts: CheckOptions) -> ValidityReport {
    let mut report = ValidityReport::default();
    d.visit(&mut |path, node| check_node(node, path, opts, &mut report.violations));
    report
}

fn check_node(node: &Derivation, path: &[usize], opts: CheckOptions, out: &mut Vec<Violation>) {
    let rule = node.name();
    let mut push = |clause: String| out.push(Violation { path: path.to_vec(), rule, clause });
    let is_root = path.is_empty();
    let flexible_cut = is_root && opts.flexible_root && rule == RuleName::Cut;
    if !node.conclusion.is_focus_viable() && !flexible_cut {
        push("focused sequent has no focus".to_string());
    }
    if node.premises.len() != rule.arity() {
        push(format!("expected {} premise(s), found {}", rule.arity(), node.premises.len()));
    }
    let schema = schema(&node.rule, &node.conclusion, opts, is_root);
    schema.clauses.into_iter().for_each(&mut push);
    if let Some(expected) = schema.premises {
        for (i, (want, got)) in expected.iter().zip(&node.premises).enumerate() {
            if want != &got.conclusion {
                push(format!("premise {i} does not match: expected {want}, found {}", got.conclusion));
            }
        }
    }
}

/// Checks independent derivations in parallel.
pub fn check_all(ds: &[Derivation], mode: Mode) -> Vec<ValidityReport> {
    std::thread::scope(|s| {
        let handles: Vec<_> = ds.iter().map(|d| s.spawn(move || check(d, mode))).collect();
        handles.into_iter().map(|h| h.join().expect("checker thread")).collect()
    })
}
