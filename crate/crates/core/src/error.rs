use thiserror::Error;

use crate::algebraize::NonAlgebraizableReason;
use crate::canonical::{Family, Point};

pub type Result<T> = std::result::Result<T, HeunError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeunError {
    #[error("invalid parameters for {family}: {message}")]
    InvalidParameters { family: Family, message: String },

    #[error("all of a0..a3 vanish; the equation is not second order")]
    DegenerateLeadingPolynomial,

    #[error("inconsistent (sigma, tau): {identity} violated by {defect:.3e}")]
    InconsistentParameters { identity: &'static str, defect: f64 },

    #[error("equation is not algebraizable ({0})")]
    NotAlgebraizable(NonAlgebraizableReason),

    #[error("not a quasi-exact instance: 2(sigma - tau) = {value} is not the level N = {n}")]
    NotAnInstance { value: String, n: usize },

    #[error("invariant subspace does not close: {which} defect {defect:.3e}")]
    ClosureViolation { which: &'static str, defect: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("no indicial equation at an ordinary point ({0})")]
    NoIndicialEquation(Point),

    #[error("indicial equation at {point} is degenerate")]
    DegenerateIndicial { point: Point },

    #[error("eigen-parameter a8 is required at {0}: the exponent depends on it")]
    EigenParameterRequired(Point),

    #[error("resonant exponent: recurrence denominator vanishes at index {index}")]
    ResonantExponent { index: usize },

    #[error("generalized polynomials with exponents {0} and {1} do not differ by an integer")]
    IncompatibleExponents(String, String),

    #[error("numerical failure: {message} (defect {defect:.3e})")]
    NumericalFailure { message: String, defect: f64 },
}
