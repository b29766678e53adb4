//! Exact scalar arithmetic for the arrangement toolkit.
//!
//! Three layers, each exact (no floating point anywhere):
//!
//! * [`cyclotomic`] — the fields ℚ(ζ_N), stored on the power basis modulo the N-th
//!   cyclotomic polynomial with automatic conductor lifting on mixed arithmetic;
//! * [`ratfunc`] — bivariate rational functions over those fields, used for one- and
//!   two-parameter families of torus points;
//! * [`matrix`] — matrices of rational functions with fraction-free (Bareiss) rank.
//!
//! Conductors are capped at 1024. Constructors that could exceed the cap return
//! [`ExactError::ConductorCap`]; the arithmetic operator impls only ever see conductors
//! dividing the lcm of their inputs' conductors, so they panic only on genuine internal
//! misuse (validate conductors at the input boundary and the cap cannot be hit mid-level).

pub mod cyclotomic;
pub mod matrix;
pub mod poly;
pub mod ratfunc;

pub use cyclotomic::{parse_rational, rational_to_string, Cyclotomic, Rat};
pub use matrix::{CycloMatrix, ExactMatrix};
pub use poly::{MPoly, UPoly};
pub use ratfunc::RatFunc;

use thiserror::Error;

/// Errors surfaced by the exact-arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("conductor {0} exceeds the supported cap of 1024")]
    ConductorCap(u64),
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("coefficient vector has length {got}, expected phi({conductor}) = {expected}")]
    CoeffLength {
        conductor: u32,
        expected: usize,
        got: usize,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("rational function has zero denominator")]
    ZeroDenominator,
    #[error("denominator vanishes at the requested specialization point")]
    PoleAtPoint,
    #[error("matrix rows have inconsistent lengths")]
    RaggedMatrix,
}
