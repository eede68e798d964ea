//! Sequents, contexts, derivation trees and the rule checker.

mod check;
mod derivation;
mod multiset;
mod sequent;

pub use check::{check, check_all, check_with, schema, CheckOptions, Mode, Schema, ValidityReport, Violation};
pub use derivation::{
    dheight, dsize, is_cut_free, render_path, BuildError, Derivation, Path, Rule, RuleName, Skeleton,
};
pub use multiset::Multiset;
pub use sequent::{
    activates_to, activations, as_neg_ctx, foci, focus_count, has_focus, is_spent, lower_ctx, neutralise, passives,
    FocCtx, FocItem, NegCtx, NotSpent, PosCtx, Sequent,
};
