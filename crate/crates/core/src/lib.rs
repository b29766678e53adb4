//! Core library: hyperplane arrangements and their intersection lattices,
//! Orlik–Solomon/Aomoto resonance computations, rank-one characteristic
//! varieties with deletion–restriction certificates, and a Fox-calculus
//! fundamental-group oracle.

pub mod arrangement;
pub mod cert;
pub mod chars;
pub mod fox;
pub mod lattice;
pub mod os;

pub use arrangement::{Arrangement, Hyperplane};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("arrangement parse error: {0}")]
    Parse(String),
    #[error("unknown hyperplane label: {0}")]
    UnknownLabel(String),
    #[error("character length {got} does not match arrangement size {expected}")]
    CharacterLength { expected: usize, got: usize },
    #[error("character host mismatch: expected {expected}, got {got}")]
    HostMismatch { expected: String, got: String },
    #[error("operation requires a central arrangement")]
    NotCentral,
    #[error("operation requires an affine (non-central) input")]
    NotAffine,
    #[error("character does not satisfy the required product condition")]
    ProductCondition,
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Exhaustive enumeration was requested for an input above the size cap.
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    /// A stored certificate no longer replays step for step.
    #[error("certificate replay failed: {0}")]
    Recheck(String),
    #[error(transparent)]
    Exact(#[from] charvar_exact::ExactError),
}
