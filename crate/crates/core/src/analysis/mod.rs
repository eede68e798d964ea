//! Erasure to unfocused dyadic proofs, phase structure and maximality probes.

mod erase;
mod maximal;
mod phases;

pub use erase::{check_dyadic, erase_derivation, erase_formula, erase_sequent, UDeriv, ULFormula, URule, USequent};
pub use maximal::{check_maximal, MaximalityReport, NodeVerdict, Verdict};
pub use phases::{phases, Phase};

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum AnalysisError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
