use super::decompose::designated;
use super::RewriteError;
use crate::kernel::{check, has_focus, lower_ctx, Derivation, FocItem, Mode, NegCtx, Rule};
use crate::syntax::Pos;

/// Turns `d ⊨ Per : Σ,[P]` (with `Σ` spent and `P` the focus at index
/// `focus`) into a proof of `⊨ Per : ⌊Σ⌋,[P]` with the same rule skeleton.
pub fn lower_deriv(d: &Derivation, focus: usize) -> Result<Derivation, RewriteError> {
    let report = check(d, Mode::Strict);
    if !report.is_ok() {
        return Err(RewriteError::InvalidInput(format!("derivation does not check:\n{report}")));
    }
    let p = designated(d, focus)?;
    lower_at(d, &p)
}

/// [`lower_deriv`] on a focus given by value, without checking the input.
pub fn lower_at(d: &Derivation, p: &Pos) -> Result<Derivation, RewriteError> {
    let ctx = d
        .conclusion
        .foc_ctx()
        .ok_or_else(|| RewriteError::InvalidInput("conclusion is not a focused sequent".into()))?;
    let sigma = ctx
        .without(&FocItem::Focus(p.clone()))
        .ok_or_else(|| RewriteError::InvalidInput(format!("{p} is not a focus of the conclusion")))?;
    lower_ctx(&sigma)?;
    if !has_focus(&sigma) {
        return Ok(d.clone());
    }
    // With spent foci around, the only active formula is P.
    match (&d.rule, d.premises.as_slice(), p) {
        (Rule::Tensor { principal, .. }, [d1, d2], Pos::Tensor(l, r)) if principal == p => {
            Ok(Derivation::tensor(lower_at(d1, l)?, lower_at(d2, r)?, l, r)?)
        }
        (Rule::PlusL { principal }, [d1], Pos::Plus(l, r)) if principal == p => {
            Ok(Derivation::plus_l(lower_at(d1, l)?, l, (**r).clone())?)
        }
        (Rule::PlusR { principal }, [d1], Pos::Plus(l, r)) if principal == p => {
            Ok(Derivation::plus_r(lower_at(d1, r)?, (**l).clone(), r)?)
        }
        (Rule::Release, [d1], Pos::Up(n)) => Ok(Derivation::release(d1.clone(), &NegCtx::singleton((**n).clone()))?),
        _ => Err(RewriteError::InvalidInput(format!("unexpected {} node above spent foci", d.name()))),
    }
}
