//! The five canonical Heun-class equations and their generic coefficients.
//!
//! Every equation is rewritten as
//!
//! ```text
//! (a0 z^3 + a1 z^2 + a2 z + a3) y'' + (a4 z^2 + a5 z + a6) y' + (a7 z + a8 + a9 / z) y = 0
//! ```
//!
//! with `-a8` playing the role of the eigen-parameter. Equations given with
//! singularities anywhere else must be normalized by the caller.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HeunError, Result};
use crate::tol::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Ghe,
    Che,
    Bhe,
    Dhe,
    The,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Ghe, Family::Che, Family::Bhe, Family::Dhe, Family::The];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ghe => "general Heun",
            Family::Che => "confluent Heun",
            Family::Bhe => "biconfluent Heun",
            Family::Dhe => "doubly-confluent Heun",
            Family::The => "triconfluent Heun",
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Family::Ghe => "ghe",
            Family::Che => "che",
            Family::Bhe => "bhe",
            Family::Dhe => "dhe",
            Family::The => "the",
        }
    }

    /// Parameter names accepted by [`HeunEquation::from_named`], in order.
    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            Family::Ghe => &["gamma", "delta", "alpha", "beta", "q", "a"],
            Family::Che => &["kappa", "gamma", "delta", "mu", "nu"],
            Family::Bhe => &["alpha", "beta", "gamma", "delta"],
            Family::Dhe => &["alpha1", "alpham1", "B1", "B0", "Bm1"],
            Family::The => &["alpha", "beta", "gamma"],
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_lowercase().as_str() {
            "ghe" | "general" => Some(Family::Ghe),
            "che" | "confluent" => Some(Family::Che),
            "bhe" | "biconfluent" => Some(Family::Bhe),
            "dhe" | "doubly-confluent" | "doublyconfluent" => Some(Family::Dhe),
            "the" | "triconfluent" => Some(Family::The),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Singular points the algebra looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Point {
    Zero,
    Infinity,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Zero => f.write_str("z=0"),
            Point::Infinity => f.write_str("z=inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingularityKind {
    Ordinary,
    Regular,
    Irregular,
}

/// General Heun equation with singularities at 0, 1, `a` and infinity.
///
/// `epsilon` is tied to the other exponents by the Fuchs relation
/// `epsilon = alpha + beta - gamma - delta + 1`; [`GeneralHeunParams::new`]
/// computes it and [`GeneralHeunParams::validate`] rejects values that break it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralHeunParams {
    pub gamma: C64,
    pub delta: C64,
    pub epsilon: C64,
    pub alpha: C64,
    pub beta: C64,
    pub q: C64,
    pub a: C64,
}

impl GeneralHeunParams {
    pub fn new(gamma: C64, delta: C64, alpha: C64, beta: C64, q: C64, a: C64) -> Self {
        let epsilon = alpha + beta - gamma - delta + 1.0;
        Self { gamma, delta, epsilon, alpha, beta, q, a }
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let invalid = |message: String| HeunError::InvalidParameters { family: Family::Ghe, message };
        if tol.is_zero(self.a) || tol.is_zero(self.a - 1.0) {
            return Err(invalid(format!("singular point a = {} must differ from 0 and 1", self.a)));
        }
        let fuchs = self.alpha + self.beta - self.gamma - self.delta + 1.0;
        let scale = 1.0 + self.alpha.norm() + self.beta.norm() + self.gamma.norm() + self.delta.norm();
        if (self.epsilon - fuchs).norm() > tol.identity * scale {
            return Err(invalid(format!(
                "epsilon = {} violates the Fuchs relation (expected {})",
                self.epsilon, fuchs
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfluentHeunParams {
    pub kappa: C64,
    pub gamma: C64,
    pub delta: C64,
    pub mu: C64,
    pub nu: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiconfluentHeunParams {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
}

/// Doubly-confluent Heun equation; `alpham1` and `bm1` are the `-1` indexed
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublyConfluentHeunParams {
    pub alpha1: C64,
    pub alpham1: C64,
    pub b1: C64,
    pub b0: C64,
    pub bm1: C64,
}

/// Triconfluent Heun equation `y'' - (3z^2 + gamma) y' + [alpha + (beta - 3)] y = 0`.
///
/// The displayed canonical form carries no explicit `z` in the bracket; the
/// coefficient table (`a7 = 0`, `a8 = alpha + beta - 3`) is followed here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriconfluentHeunParams {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum HeunEquation {
    Ghe(GeneralHeunParams),
    Che(ConfluentHeunParams),
    Bhe(BiconfluentHeunParams),
    Dhe(DoublyConfluentHeunParams),
    The(TriconfluentHeunParams),
}

impl HeunEquation {
    pub fn family(&self) -> Family {
        match self {
            HeunEquation::Ghe(_) => Family::Ghe,
            HeunEquation::Che(_) => Family::Che,
            HeunEquation::Bhe(_) => Family::Bhe,
            HeunEquation::Dhe(_) => Family::Dhe,
            HeunEquation::The(_) => Family::The,
        }
    }

    /// Build an equation from named parameters (see [`Family::parameter_names`]).
    ///
    /// For the general equation `epsilon` may be given explicitly, in which
    /// case it must satisfy the Fuchs relation; otherwise it is derived.
    pub fn from_named(family: Family, lookup: impl Fn(&str) -> Option<C64>) -> Result<Self> {
        let get = |name: &str| {
            lookup(name).ok_or_else(|| HeunError::InvalidParameters {
                family,
                message: format!("missing parameter `{name}`"),
            })
        };
        Ok(match family {
            Family::Ghe => {
                let mut p = GeneralHeunParams::new(
                    get("gamma")?,
                    get("delta")?,
                    get("alpha")?,
                    get("beta")?,
                    get("q")?,
                    get("a")?,
                );
                if let Some(eps) = lookup("epsilon") {
                    p.epsilon = eps;
                }
                HeunEquation::Ghe(p)
            }
            Family::Che => HeunEquation::Che(ConfluentHeunParams {
                kappa: get("kappa")?,
                gamma: get("gamma")?,
                delta: get("delta")?,
                mu: get("mu")?,
                nu: get("nu")?,
            }),
            Family::Bhe => HeunEquation::Bhe(BiconfluentHeunParams {
                alpha: get("alpha")?,
                beta: get("beta")?,
                gamma: get("gamma")?,
                delta: get("delta")?,
            }),
            Family::Dhe => HeunEquation::Dhe(DoublyConfluentHeunParams {
                alpha1: get("alpha1")?,
                alpham1: get("alpham1")?,
                b1: get("B1")?,
                b0: get("B0")?,
                bm1: get("Bm1")?,
            }),
            Family::The => HeunEquation::The(TriconfluentHeunParams {
                alpha: get("alpha")?,
                beta: get("beta")?,
                gamma: get("gamma")?,
            }),
        })
    }

    /// Named parameter values, in [`Family::parameter_names`] order.
    pub fn named_parameters(&self) -> Vec<(&'static str, C64)> {
        match *self {
            HeunEquation::Ghe(p) => vec![
                ("gamma", p.gamma),
                ("delta", p.delta),
                ("alpha", p.alpha),
                ("beta", p.beta),
                ("q", p.q),
                ("a", p.a),
            ],
            HeunEquation::Che(p) => vec![
                ("kappa", p.kappa),
                ("gamma", p.gamma),
                ("delta", p.delta),
                ("mu", p.mu),
                ("nu", p.nu),
            ],
            HeunEquation::Bhe(p) => {
                vec![("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma), ("delta", p.delta)]
            }
            HeunEquation::Dhe(p) => vec![
                ("alpha1", p.alpha1),
                ("alpham1", p.alpham1),
                ("B1", p.b1),
                ("B0", p.b0),
                ("Bm1", p.bm1),
            ],
            HeunEquation::The(p) => vec![("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma)],
        }
    }

    /// Translate an eigenvalue `lambda = -a8` back to the family's native
    /// eigen-parameter, holding every other parameter fixed.
    pub fn native_eigen_parameter(&self, lambda: C64) -> EigenParameter {
        let (name, value) = match *self {
            HeunEquation::Ghe(_) => ("q", lambda),
            // mu also enters a7 = mu + nu; nu is understood to absorb the shift.
            HeunEquation::Che(_) => ("mu", lambda),
            HeunEquation::Bhe(p) => ("delta", 2.0 * lambda - (1.0 + p.alpha) * p.beta),
            HeunEquation::Dhe(p) => ("B0", -lambda - p.alpha1 * p.alpham1 / 2.0),
            HeunEquation::The(p) => ("alpha", 3.0 - p.beta - lambda),
        };
        EigenParameter { name: name.to_string(), value }
    }
}

/// A family's own eigen-parameter recovered from `-a8`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenParameter {
    pub name: String,
    pub value: C64,
}

/// The ten constants `a0..a9` of the generic form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenericCoefficients {
    pub a: [C64; 10],
}

impl GenericCoefficients {
    pub fn new(a: [C64; 10]) -> Result<Self> {
        if a[..4].iter().all(|x| *x == C64::new(0.0, 0.0)) {
            return Err(HeunError::DegenerateLeadingPolynomial);
        }
        Ok(Self { a })
    }

    pub fn from_real(a: [f64; 10]) -> Result<Self> {
        Self::new(a.map(|x| C64::new(x, 0.0)))
    }

    /// Same coefficients with `a8` replaced.
    pub fn with_a8(mut self, a8: C64) -> Self {
        self.a[8] = a8;
        self
    }

    /// Largest coefficient magnitude, at least 1.
    pub fn scale(&self) -> f64 {
        self.a.iter().fold(1.0_f64, |m, x| m.max(x.norm()))
    }

    /// `O+` absent: `a0 = a4 = a7 = 0`.
    pub fn raising_absent(&self, tol: &Tolerances) -> bool {
        [0, 4, 7].iter().all(|&i| tol.is_zero(self.a[i]))
    }

    /// `O-` and `O--` absent: `a2 = a3 = a6 = a9 = 0`.
    pub fn lowering_absent(&self, tol: &Tolerances) -> bool {
        [2, 3, 6, 9].iter().all(|&i| tol.is_zero(self.a[i]))
    }
}

impl std::ops::Index<usize> for GenericCoefficients {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.a[i]
    }
}

pub fn to_generic(eq: &HeunEquation) -> Result<GenericCoefficients> {
    to_generic_with(eq, &Tolerances::default())
}

pub fn to_generic_with(eq: &HeunEquation, tol: &Tolerances) -> Result<GenericCoefficients> {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let a = match *eq {
        HeunEquation::Ghe(p) => {
            p.validate(tol)?;
            [
                one,
                -(p.a + 1.0),
                p.a,
                zero,
                1.0 + p.alpha + p.beta,
                -(p.a * p.gamma + p.a * p.delta - p.delta + p.alpha + p.beta + 1.0),
                p.a * p.gamma,
                p.alpha * p.beta,
                -p.q,
                zero,
            ]
        }
        HeunEquation::Che(p) => [
            zero,
            one,
            -one,
            zero,
            p.kappa,
            p.gamma + p.delta - p.kappa,
            -p.gamma,
            p.mu + p.nu,
            -p.mu,
            zero,
        ],
        HeunEquation::Bhe(p) => [
            zero,
            zero,
            one,
            zero,
            C64::new(-2.0, 0.0),
            -p.beta,
            1.0 + p.alpha,
            p.gamma - p.alpha - 2.0,
            -0.5 * (p.delta + (1.0 + p.alpha) * p.beta),
            zero,
        ],
        HeunEquation::Dhe(p) => [
            zero,
            one,
            zero,
            zero,
            p.alpha1,
            one,
            p.alpham1,
            p.b1 + p.alpha1 / 2.0,
            p.b0 + p.alpha1 * p.alpham1 / 2.0,
            p.bm1 - p.alpham1 / 2.0,
        ],
        HeunEquation::The(p) => [
            zero,
            zero,
            zero,
            one,
            C64::new(-3.0, 0.0),
            zero,
            -p.gamma,
            zero,
            p.alpha + (p.beta - 3.0),
            zero,
        ],
    };
    GenericCoefficients::new(a)
}

/// Nature of `z = 0` or `z = infinity` for the generic form.
pub fn classify_singularity(c: &GenericCoefficients, point: Point, tol: &Tolerances) -> SingularityKind {
    let z = |i: usize| tol.is_zero(c[i]);
    match point {
        Point::Zero => {
            if !z(3) {
                SingularityKind::Ordinary
            } else if !z(2) || (c.lowering_absent(tol) && !z(1)) {
                SingularityKind::Regular
            } else {
                SingularityKind::Irregular
            }
        }
        Point::Infinity => {
            if !z(0) || (c.raising_absent(tol) && z(3) && !z(1)) {
                SingularityKind::Regular
            } else {
                SingularityKind::Irregular
            }
        }
    }
}
