use serde::{Deserialize, Serialize};

/// Thresholds used across the pipeline.
///
/// Branch decisions in algebraization are discontinuous in the coefficients,
/// so classification of inputs close to a boundary depends on `zero`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Absolute zero test on the generic coefficients `a0..a9`.
    pub zero: f64,
    /// Acceptance window for `2(sigma - tau)` being a non-negative integer.
    pub half_integer: f64,
    /// Relative tolerance of the self-consistency root identities.
    pub identity: f64,
    /// Absolute tolerance when merging generalized monomial exponents.
    pub exponent_merge: f64,
    /// Relative operator residual for a verified quasi-polynomial.
    pub residual: f64,
    /// Relative Frobenius tail magnitude for a verified quasi-polynomial.
    pub truncation: f64,
    /// Relative eigenpair residual bound, scaled by `max(1, ||M||_inf)`.
    pub eigen_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: 1e-12,
            half_integer: 1e-9,
            identity: 1e-9,
            exponent_merge: 1e-9,
            residual: 1e-9,
            truncation: 1e-8,
            eigen_residual: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn with_zero(mut self, zero: f64) -> Self {
        self.zero = zero;
        self
    }

    #[inline]
    pub fn is_zero(&self, x: crate::C64) -> bool {
        x.norm() <= self.zero
    }
}
