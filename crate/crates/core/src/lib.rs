//! Bi-parametric su(1,1) algebraization of the Heun class of equations.
//!
//! The pipeline runs in five stages:
//!
//! 1. [`canonical`] maps the five canonical equations (general, confluent,
//!    biconfluent, doubly-confluent, triconfluent) onto the ten generic
//!    coefficients `a0..a9` of `P3 y'' + P2 y' + P1 y = 0`.
//! 2. [`algebraize`] solves for the generator parameters `sigma`, `tau` and the
//!    quadratic-ansatz coefficients, or reports why no solution exists.
//! 3. [`solvability`] decides quasi-exact or exact solvability and enumerates
//!    `(sigma, tau, N)` instances with `sigma - tau = N/2`.
//! 4. [`specmat`] builds the `(N+1)`-dimensional invariant-subspace matrix,
//!    solves its eigenproblem and assembles quasi-polynomials `z^{2 tau} P_N(z)`.
//! 5. [`frobenius`] verifies each solution independently through indicial
//!    exponents, series recurrences and operator residuals.
//!
//! [`reps`] classifies the representations that host the solutions, and
//! [`su11`] holds the generators and the graded operator parts everything
//! else is expressed through.

pub mod algebraize;
pub mod canonical;
pub mod error;
pub mod exec;
pub mod frobenius;
pub mod reps;
pub mod solvability;
pub mod specmat;
pub mod su11;
pub mod tol;

pub use num_complex::Complex64 as C64;

pub use algebraize::{algebraize, AlgebraizationResult, ParamResolution};
pub use canonical::{Family, GenericCoefficients, HeunEquation};
pub use error::{HeunError, Result};
pub use solvability::{classify, QesInstance, SolvabilityMode, SolvabilityReport};
pub use specmat::{InvariantMatrix, QuasiPolynomial};
pub use su11::GeneralizedPolynomial;
pub use tol::Tolerances;

#[cfg(test)]
#[inline]
pub(crate) fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
