use super::RewriteError;
use crate::kernel::{check, is_spent, BuildError, Derivation, FocCtx, FocItem, Mode, Rule};
use crate::syntax::Pos;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// One rule application of a replayable suffix. The hole is the premise
/// that receives the derivation being rebuilt.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum SuffixStep {
    Tensor { principal: Pos, hole: Side, other: Derivation },
    Plus { principal: Pos, hole: Side },
}

impl SuffixStep {
    /// Rule instances contributed by this step, including the fixed premise.
    pub fn rule_count(&self) -> usize {
        match self {
            SuffixStep::Tensor { other, .. } => 1 + other.size(),
            SuffixStep::Plus { .. } => 1,
        }
    }

    fn apply(&self, d: Derivation) -> Result<Derivation, BuildError> {
        match self {
            SuffixStep::Tensor { principal: Pos::Tensor(l, r), hole, other } => match hole {
                Side::Left => Derivation::tensor(d, other.clone(), l, r),
                Side::Right => Derivation::tensor(other.clone(), d, l, r),
            },
            SuffixStep::Plus { principal: Pos::Plus(l, r), hole } => match hole {
                Side::Left => Derivation::plus_l(d, l, (**r).clone()),
                Side::Right => Derivation::plus_r(d, (**l).clone(), r),
            },
            _ => unreachable!("suffix steps are built from tensor and plus principals"),
        }
    }
}

/// A recipe turning a proof of `⊨ Per : Σ,Δ` into one of `⊨ Per : Ψ,Δ`,
/// for any `Δ`. Steps are applied in order, innermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OpenDerivation {
    pub steps: Vec<SuffixStep>,
}

impl OpenDerivation {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of rule instances the recipe adds.
    pub fn rule_count(&self) -> usize {
        self.steps.iter().map(SuffixStep::rule_count).sum()
    }

    pub fn replay(&self, d: Derivation) -> Result<Derivation, RewriteError> {
        self.steps.iter().try_fold(d, |acc, s| s.apply(acc)).map_err(RewriteError::from)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompResult {
    pub core: Derivation,
    pub suffix: OpenDerivation,
    pub sigma: FocCtx,
}

/// Splits `d ⊨ Per : Ψ,[P]` at the focus with index `focus` into a core
/// proof of `⊨ Per : Σ,[P]` with `Σ` spent and a suffix rebuilding `Ψ`.
pub fn decompose(d: &Derivation, focus: usize) -> Result<DecompResult, RewriteError> {
    let report = check(d, Mode::Strict);
    if !report.is_ok() {
        return Err(RewriteError::InvalidInput(format!("derivation does not check:\n{report}")));
    }
    let p = designated(d, focus)?;
    decompose_at(d, &p)
}

pub(crate) fn designated(d: &Derivation, focus: usize) -> Result<Pos, RewriteError> {
    let ctx = d
        .conclusion
        .foc_ctx()
        .ok_or_else(|| RewriteError::InvalidInput("conclusion is not a focused sequent".into()))?;
    match ctx.get(focus) {
        Some(FocItem::Focus(p)) => Ok(p.clone()),
        Some(FocItem::Passive(n)) => {
            Err(RewriteError::InvalidInput(format!("item {focus} is the passive formula {n}, not a focus")))
        }
        None => Err(RewriteError::InvalidInput(format!("no context item with index {focus}"))),
    }
}

/// [`decompose`] on a focus given by value, without checking the input.
pub fn decompose_at(d: &Derivation, p: &Pos) -> Result<DecompResult, RewriteError> {
    let ctx = d
        .conclusion
        .foc_ctx()
        .ok_or_else(|| RewriteError::InvalidInput("conclusion is not a focused sequent".into()))?;
    let rest = ctx
        .without(&FocItem::Focus(p.clone()))
        .ok_or_else(|| RewriteError::InvalidInput(format!("{p} is not a focus of the conclusion")))?;
    if is_spent(&rest) {
        return Ok(DecompResult { core: d.clone(), suffix: OpenDerivation::default(), sigma: rest });
    }
    match (&d.rule, d.premises.as_slice()) {
        (Rule::Tensor { principal, left }, [d1, d2]) => {
            let Pos::Tensor(l, r) = principal else { unreachable!("tensor principal") };
            if principal == p {
                let a = decompose_at(d1, l)?;
                let b = decompose_at(d2, r)?;
                let core = Derivation::tensor(a.core, b.core, l, r)?;
                let mut steps = b.suffix.steps;
                steps.extend(a.suffix.steps);
                Ok(DecompResult { core, suffix: OpenDerivation { steps }, sigma: a.sigma.union(&b.sigma) })
            } else {
                let in_left = left.contains(&FocItem::Focus(p.clone()));
                let (inner, other, hole) = if in_left { (d1, d2, Side::Left) } else { (d2, d1, Side::Right) };
                let mut res = decompose_at(inner, p)?;
                res.suffix.steps.push(SuffixStep::Tensor { principal: principal.clone(), hole, other: other.clone() });
                Ok(res)
            }
        }
        (Rule::PlusL { principal } | Rule::PlusR { principal }, [d1]) => {
            let Pos::Plus(l, r) = principal else { unreachable!("plus principal") };
            let hole = if matches!(d.rule, Rule::PlusL { .. }) { Side::Left } else { Side::Right };
            if principal == p {
                let chosen = if hole == Side::Left { l } else { r };
                let res = decompose_at(d1, chosen)?;
                let core = match hole {
                    Side::Left => Derivation::plus_l(res.core, l, (**r).clone())?,
                    Side::Right => Derivation::plus_r(res.core, (**l).clone(), r)?,
                };
                Ok(DecompResult { core, ..res })
            } else {
                let mut res = decompose_at(d1, p)?;
                res.suffix.steps.push(SuffixStep::Plus { principal: principal.clone(), hole });
                Ok(res)
            }
        }
        _ => Err(RewriteError::InvalidInput(format!(
            "cannot decompose a {} node whose remaining context is not spent",
            d.name()
        ))),
    }
}
