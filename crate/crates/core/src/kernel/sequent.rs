use super::multiset::Multiset;
use crate::syntax::{Neg, Pos};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type PosCtx = Multiset<Pos>;
pub type NegCtx = Multiset<Neg>;
pub type FocCtx = Multiset<FocItem>;

/// A member of a focused context: a passive negative or a focus `[P]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FocItem {
    Passive(Neg),
    Focus(Pos),
}

impl FocItem {
    pub fn as_focus(&self) -> Option<&Pos> {
        match self {
            FocItem::Focus(p) => Some(p),
            FocItem::Passive(_) => None,
        }
    }

    pub fn as_passive(&self) -> Option<&Neg> {
        match self {
            FocItem::Passive(n) => Some(n),
            FocItem::Focus(_) => None,
        }
    }

    pub fn is_focus(&self) -> bool {
        matches!(self, FocItem::Focus(_))
    }
}

impl fmt::Display for FocItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FocItem::Passive(n) => n.fmt(f),
            FocItem::Focus(p) => write!(f, "(focus {p})"),
        }
    }
}

pub fn passives(ctx: &NegCtx) -> FocCtx {
    ctx.map(|n| FocItem::Passive(n.clone()))
}

pub fn foci(ps: &PosCtx) -> FocCtx {
    ps.map(|p| FocItem::Focus(p.clone()))
}

pub fn focus_count(ctx: &FocCtx) -> usize {
    ctx.iter().filter(|i| i.is_focus()).count()
}

pub fn has_focus(ctx: &FocCtx) -> bool {
    ctx.iter().any(FocItem::is_focus)
}

/// The passive part of a focus-free context, or `None` if it has a focus.
pub fn as_neg_ctx(ctx: &FocCtx) -> Option<NegCtx> {
    ctx.iter().map(|i| i.as_passive().cloned()).collect::<Option<Vec<_>>>().map(NegCtx::from)
}

/// Spent contexts: every focus is of the form `[⇑N]`.
pub fn is_spent(ctx: &FocCtx) -> bool {
    ctx.iter().all(|i| !matches!(i, FocItem::Focus(p) if !matches!(p, Pos::Up(_))))
}

/// `⟨Ψ⟩`: every focus `[P]` becomes the passive `⇓P`.
pub fn neutralise(psi: &FocCtx) -> NegCtx {
    psi.map(|i| match i {
        FocItem::Passive(n) => n.clone(),
        FocItem::Focus(p) => Neg::down(p.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("context is not spent: focus {0} is not an upshift")]
pub struct NotSpent(pub Pos);

/// `⌊Σ⌋`: every spent focus `[⇑N]` becomes the passive `N`.
pub fn lower_ctx(sigma: &FocCtx) -> Result<NegCtx, NotSpent> {
    sigma
        .iter()
        .map(|i| match i {
            FocItem::Passive(n) => Ok(n.clone()),
            FocItem::Focus(Pos::Up(n)) => Ok((**n).clone()),
            FocItem::Focus(p) => Err(NotSpent(p.clone())),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(NegCtx::from)
}

/// All `Ξ` with `Ψ ⇗ Ξ`: each passive `⇓P` may independently stay or become
/// the focus `[P]`. Occurrences are treated separately, so the result has
/// `2^k` entries for `k` passive downshifts (equal contexts may repeat).
pub fn activations(psi: &FocCtx) -> Vec<FocCtx> {
    let mut out: Vec<Vec<FocItem>> = vec![Vec::new()];
    for item in psi {
        match item {
            FocItem::Passive(Neg::Down(p)) => {
                let mut next = Vec::with_capacity(out.len() * 2);
                for base in out {
                    let mut active = base.clone();
                    active.push(FocItem::Focus((**p).clone()));
                    let mut kept = base;
                    kept.push(item.clone());
                    next.push(kept);
                    next.push(active);
                }
                out = next;
            }
            _ => out.iter_mut().for_each(|v| v.push(item.clone())),
        }
    }
    out.into_iter().map(FocCtx::from).collect()
}

/// Decides `Ψ ⇗ Ξ`.
pub fn activates_to(psi: &FocCtx, xi: &FocCtx) -> bool {
    let mut pool = psi.clone();
    // Passives of Ξ must match passives of Ψ exactly.
    for item in xi.iter().filter(|i| !i.is_focus()) {
        if !pool.remove(item) {
            return false;
        }
    }
    // Foci consume an existing focus first, otherwise activate a `⇓P`.
    for item in xi.iter().filter(|i| i.is_focus()) {
        if pool.remove(item) {
            continue;
        }
        let p = item.as_focus().expect("focus item");
        if !pool.remove(&FocItem::Passive(Neg::down(p.clone()))) {
            return false;
        }
    }
    pool.is_empty()
}

/// `⊢ Per : Γ` (inversion) or `⊨ Per : Ψ` (focusing).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Sequent {
    Inv { per: PosCtx, ctx: NegCtx },
    Foc { per: PosCtx, ctx: FocCtx },
}

impl Sequent {
    pub fn inv(per: PosCtx, ctx: NegCtx) -> Self {
        Sequent::Inv { per, ctx }
    }

    pub fn foc(per: PosCtx, ctx: FocCtx) -> Self {
        Sequent::Foc { per, ctx }
    }

    pub fn per(&self) -> &PosCtx {
        match self {
            Sequent::Inv { per, .. } | Sequent::Foc { per, .. } => per,
        }
    }

    pub fn per_mut(&mut self) -> &mut PosCtx {
        match self {
            Sequent::Inv { per, .. } | Sequent::Foc { per, .. } => per,
        }
    }

    pub fn is_focused(&self) -> bool {
        matches!(self, Sequent::Foc { .. })
    }

    pub fn foc_ctx(&self) -> Option<&FocCtx> {
        match self {
            Sequent::Foc { ctx, .. } => Some(ctx),
            Sequent::Inv { .. } => None,
        }
    }

    pub fn inv_ctx(&self) -> Option<&NegCtx> {
        match self {
            Sequent::Inv { ctx, .. } => Some(ctx),
            Sequent::Foc { .. } => None,
        }
    }

    /// Inversion sequents are always viable; focused ones need a focus.
    pub fn is_focus_viable(&self) -> bool {
        match self {
            Sequent::Inv { .. } => true,
            Sequent::Foc { ctx, .. } => has_focus(ctx),
        }
    }

    /// Number of context members, foci included.
    pub fn ctx_len(&self) -> usize {
        match self {
            Sequent::Inv { ctx, .. } => ctx.len(),
            Sequent::Foc { ctx, .. } => ctx.len(),
        }
    }

    /// The focus-free reading of a focused sequent: `⊨ Per : Γ` as `⊢ Per : Γ`.
    pub fn coerce_to_inv(&self) -> Option<Sequent> {
        match self {
            Sequent::Foc { per, ctx } => as_neg_ctx(ctx).map(|g| Sequent::inv(per.clone(), g)),
            Sequent::Inv { .. } => None,
        }
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| format!(" {x}")).collect()
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sequent::Inv { per, ctx } => write!(f, "(inv (per{}) (ctx{}))", join(per), join(ctx)),
            Sequent::Foc { per, ctx } => write!(f, "(foc (per{}) (ctx{}))", join(per), join(ctx)),
        }
    }
}
