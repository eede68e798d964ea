//! Proof kernel and cut-elimination engine for multifocused polarized
//! linear logic.
//!
//! * [`syntax`]: polarized formulas, duality, s-expression reading/printing.
//! * [`kernel`]: sequents, derivations and the rule checker.
//! * [`format`]: the proof file format and its JSON mirror.
//! * [`rewrite`]: decomposition of focused phases, lowering of spent foci,
//!   and the cut-elimination engine.
//! * [`analysis`]: erasure to unfocused dyadic proofs, phase extraction and
//!   maximality probing.
//! * [`search`]: bounded exhaustive proof search.
//! * [`corpus`]: hand-built reference derivations.

pub mod analysis;
pub mod corpus;
pub mod format;
pub mod kernel;
pub mod rewrite;
pub mod search;
pub mod syntax;
