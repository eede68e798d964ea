//! Decomposition of focused derivations, lowering of spent foci and the
//! cut-elimination engine.

mod decompose;
mod engine;
mod lower;

pub use decompose::{decompose, decompose_at, DecompResult, OpenDerivation, Side, SuffixStep};
pub use engine::{normalize, reduce_step, CutMeasure, Flavor, NormalizeOptions, ReductionTrace, TraceStep};
pub use lower::{lower_at, lower_deriv};

use crate::kernel::{render_path, BuildError, NotSpent, Path, RuleName, ValidityReport};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum RewriteError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    NotSpent(#[from] NotSpent),
    #[error("ill-formed cut at {}: the conclusion would be a focused sequent without foci", render_path(.path))]
    IllFormedCut { path: Path },
    #[error("stuck at {}: {msg}", render_path(.path))]
    Stuck { path: Path, msg: String },
    #[error("no reduction for {rule} at {}", render_path(.path))]
    Unsupported { path: Path, rule: RuleName },
    #[error("invalid intermediate derivation after reducing {}:\n{report}", render_path(.path))]
    Paranoid { path: Path, report: ValidityReport },
}

impl RewriteError {
    pub(crate) fn stuck(msg: impl Into<String>) -> Self {
        RewriteError::Stuck { path: Vec::new(), msg: msg.into() }
    }

    pub(crate) fn at(mut self, path: &[usize]) -> Self {
        if let RewriteError::Stuck { path: p, .. } | RewriteError::Unsupported { path: p, .. } = &mut self {
            *p = path.to_vec();
        }
        self
    }
}

impl From<BuildError> for RewriteError {
    fn from(e: BuildError) -> Self {
        RewriteError::stuck(format!("{}: {}", e.rule.as_str(), e.msg))
    }
}
