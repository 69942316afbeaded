//! Bi-parametric su(1,1) generators and the graded parts of the Heun operator.
//!
//! ```text
//! J+ = z^2 d/dz - 2 sigma z
//! J0 = z d/dz - (sigma + tau)
//! J- = d/dz - 2 tau / z
//! ```
//!
//! Everything acts on [`GeneralizedPolynomial`] values, finite sums of
//! `z^{rho + k}` with a complex base exponent `rho`.

use serde::{Deserialize, Serialize};

use crate::canonical::GenericCoefficients;
use crate::error::{HeunError, Result};
use crate::C64;

/// Default absolute tolerance for deciding that two exponents differ by an integer.
pub const EXPONENT_MERGE_TOL: f64 = 1e-9;

/// `sum_k coeffs[k] z^{base + k}`.
///
/// Trailing exact zeros are trimmed on construction; [`GeneralizedPolynomial::trim`]
/// applies a threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedPolynomial {
    pub base: C64,
    pub coeffs: Vec<C64>,
}

impl GeneralizedPolynomial {
    pub fn new(base: C64, coeffs: Vec<C64>) -> Self {
        let mut p = Self { base, coeffs };
        p.trim(0.0);
        p
    }

    pub fn zero(base: C64) -> Self {
        Self { base, coeffs: Vec::new() }
    }

    pub fn monomial(power: C64) -> Self {
        Self { base: power, coeffs: vec![C64::new(1.0, 0.0)] }
    }

    /// Drop trailing coefficients with magnitude `<= threshold`.
    pub fn trim(&mut self, threshold: f64) {
        while self.coeffs.last().is_some_and(|c| c.norm() <= threshold) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == C64::new(0.0, 0.0))
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// `(power, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        self.coeffs.iter().enumerate().map(|(k, c)| (self.base + k as f64, *c))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { base: self.base, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn eval(&self, z: C64) -> C64 {
        let poly = self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
        z.powc(self.base) * poly
    }

    /// Integer offset `other.base - self.base`, if the exponents are commensurate.
    pub fn offset_to(&self, other: &Self, tol: f64) -> Option<i64> {
        let d = other.base - self.base;
        let k = d.re.round();
        ((d - k).norm() <= tol).then_some(k as i64)
    }

    /// Sum of two values whose base exponents differ by an integer.
    pub fn try_add(&self, other: &Self, tol: f64) -> Result<Self> {
        if other.coeffs.is_empty() {
            return Ok(self.clone());
        }
        if self.coeffs.is_empty() {
            return Ok(other.clone());
        }
        let off = self
            .offset_to(other, tol)
            .ok_or_else(|| HeunError::IncompatibleExponents(self.base.to_string(), other.base.to_string()))?;
        let (lo, hi, shift) = if off >= 0 { (self, other, off as usize) } else { (other, self, (-off) as usize) };
        let len = lo.coeffs.len().max(hi.coeffs.len() + shift);
        let mut coeffs = vec![C64::new(0.0, 0.0); len];
        for (k, c) in lo.coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in hi.coeffs.iter().enumerate() {
            coeffs[k + shift] += c;
        }
        Ok(Self::new(lo.base, coeffs))
    }

    pub fn sub(&self, other: &Self, tol: f64) -> Result<Self> {
        self.try_add(&other.scale(C64::new(-1.0, 0.0)), tol)
    }

    /// Map each term `c z^q` to `f(q) c z^{q + shift}`.
    fn map_terms(&self, shift: i64, f: impl Fn(C64) -> C64) -> Self {
        let coeffs = self.terms().map(|(q, c)| f(q) * c).collect();
        Self::new(self.base + shift as f64, coeffs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    Plus,
    Zero,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub sigma: C64,
    pub tau: C64,
}

impl GeneratorParams {
    pub fn new(sigma: C64, tau: C64) -> Self {
        Self { sigma, tau }
    }

    /// Representation parameter `j = sigma - tau`.
    pub fn j(&self) -> C64 {
        self.sigma - self.tau
    }
}

/// Eigen-factor of a generator on `z^q`; the image is `factor * z^{q + shift}`.
pub fn generator_factor(g: Generator, p: &GeneratorParams, q: C64) -> (C64, i64) {
    match g {
        Generator::Plus => (q - 2.0 * p.sigma, 1),
        Generator::Zero => (q - p.sigma - p.tau, 0),
        Generator::Minus => (q - 2.0 * p.tau, -1),
    }
}

pub fn apply_generator(g: Generator, p: &GeneratorParams, x: &GeneralizedPolynomial) -> GeneralizedPolynomial {
    let shift = generator_factor(g, p, C64::new(0.0, 0.0)).1;
    x.map_terms(shift, |q| generator_factor(g, p, q).0)
}

fn apply_word(word: &[Generator], p: &GeneratorParams, x: &GeneralizedPolynomial) -> GeneralizedPolynomial {
    // Rightmost generator acts first.
    word.iter().rev().fold(x.clone(), |acc, g| apply_generator(*g, p, &acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GradedPart {
    Plus,
    Zero,
    Minus,
    MinusMinus,
}

impl GradedPart {
    pub const ALL: [GradedPart; 4] = [GradedPart::Plus, GradedPart::Zero, GradedPart::Minus, GradedPart::MinusMinus];

    pub fn degree(self) -> i64 {
        match self {
            GradedPart::Plus => 1,
            GradedPart::Zero => 0,
            GradedPart::Minus => -1,
            GradedPart::MinusMinus => -2,
        }
    }
}

/// Factor `f(p)` with `O z^p = f(p) z^{p + degree}`.
pub fn graded_factor(part: GradedPart, c: &GenericCoefficients, p: C64) -> C64 {
    let pp = p * (p - 1.0);
    match part {
        GradedPart::Plus => c[0] * pp + c[4] * p + c[7],
        GradedPart::Zero => c[1] * pp + c[5] * p + c[8],
        GradedPart::Minus => c[2] * pp + c[6] * p + c[9],
        GradedPart::MinusMinus => c[3] * pp,
    }
}

pub fn apply_graded_part(part: GradedPart, c: &GenericCoefficients, x: &GeneralizedPolynomial) -> GeneralizedPolynomial {
    x.map_terms(part.degree(), |q| graded_factor(part, c, q))
}

/// Full operator `P3 y'' + P2 y' + P1 y` as the sum of the four graded parts.
///
/// The result starts two powers below `x.base` so that every part lands
/// inside the same coefficient vector.
pub fn apply_operator(c: &GenericCoefficients, x: &GeneralizedPolynomial) -> GeneralizedPolynomial {
    let n = x.coeffs.len();
    let mut out = vec![C64::new(0.0, 0.0); n + 3];
    for (k, (q, xc)) in x.terms().enumerate() {
        for part in GradedPart::ALL {
            let idx = (k as i64 + 2 + part.degree()) as usize;
            out[idx] += graded_factor(part, c, q) * xc;
        }
    }
    GeneralizedPolynomial::new(x.base - 2.0, out)
}

/// Coefficients of the quadratic ansatz
/// `c+0 J+J0 + c+- J+J- + c0- J0J- + c-- J-J- + c+ J+ + c0 J0 + c- J- + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CCoefficients {
    pub c_p0: C64,
    pub c_plus: C64,
    pub c_0m: C64,
    pub c_minus: C64,
    pub c_pm: C64,
    pub c_0: C64,
    pub c_mm: C64,
    pub c: C64,
}

impl CCoefficients {
    pub fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        Self { c_p0: z, c_plus: z, c_0m: z, c_minus: z, c_pm: z, c_0: z, c_mm: z, c: z }
    }
}

/// Apply the ansatz built from `cc` and the generators at `p`.
pub fn apply_ansatz(cc: &CCoefficients, p: &GeneratorParams, x: &GeneralizedPolynomial) -> GeneralizedPolynomial {
    use Generator::*;
    let terms: [(C64, &[Generator]); 8] = [
        (cc.c_p0, &[Plus, Zero]),
        (cc.c_pm, &[Plus, Minus]),
        (cc.c_0m, &[Zero, Minus]),
        (cc.c_mm, &[Minus, Minus]),
        (cc.c_plus, &[Plus]),
        (cc.c_0, &[Zero]),
        (cc.c_minus, &[Minus]),
        (cc.c, &[]),
    ];
    terms
        .iter()
        .map(|(coef, word)| apply_word(word, p, x).scale(*coef))
        .fold(GeneralizedPolynomial::zero(x.base), |acc, t| {
            acc.try_add(&t, EXPONENT_MERGE_TOL).expect("generator images share the lattice of x")
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CommutatorPair {
    J0Jp,
    J0Jm,
    JpJm,
}

/// Largest coefficient of `([A, B] - expected) z^q` over the probes, relative
/// to the largest coefficient of `AB z^q` and `BA z^q` (floored at 1).
///
/// Expected values: `[J0, J+] = J+`, `[J0, J-] = -J-`, `[J+, J-] = -2 J0`.
pub fn commutator_defect(p: &GeneratorParams, pair: CommutatorPair, probes: &[C64]) -> f64 {
    use Generator::*;
    let (a, b, expected, factor) = match pair {
        CommutatorPair::J0Jp => (Zero, Plus, Plus, 1.0),
        CommutatorPair::J0Jm => (Zero, Minus, Minus, -1.0),
        CommutatorPair::JpJm => (Plus, Minus, Zero, -2.0),
    };
    probes
        .iter()
        .map(|q| {
            let x = GeneralizedPolynomial::monomial(*q);
            let ab = apply_word(&[a, b], p, &x);
            let ba = apply_word(&[b, a], p, &x);
            let rhs = apply_generator(expected, p, &x).scale(C64::new(factor, 0.0));
            let scale = ab.max_abs().max(ba.max_abs()).max(1.0);
            let d = ab
                .sub(&ba, EXPONENT_MERGE_TOL)
                .and_then(|c| c.sub(&rhs, EXPONENT_MERGE_TOL))
                .expect("same lattice");
            d.max_abs() / scale
        })
        .fold(0.0, f64::max)
}

/// `-(sigma - tau)(sigma - tau + 1)`.
pub fn casimir_value(p: &GeneratorParams) -> C64 {
    let j = p.j();
    -j * (j + 1.0)
}

/// `(1/2)(J+J- + J-J+) - J0 J0` applied to `x`.
pub fn apply_casimir(p: &GeneratorParams, x: &GeneralizedPolynomial) -> GeneralizedPolynomial {
    use Generator::*;
    let half = C64::new(0.5, 0.0);
    let pm = apply_word(&[Plus, Minus], p, x).scale(half);
    let mp = apply_word(&[Minus, Plus], p, x).scale(half);
    let zz = apply_word(&[Zero, Zero], p, x);
    pm.try_add(&mp, EXPONENT_MERGE_TOL)
        .and_then(|s| s.sub(&zz, EXPONENT_MERGE_TOL))
        .expect("same lattice")
}

/// Relative defect of the operator Casimir against [`casimir_value`] on the probes.
pub fn casimir_defect(p: &GeneratorParams, probes: &[C64]) -> f64 {
    let cv = casimir_value(p);
    probes
        .iter()
        .map(|q| {
            let x = GeneralizedPolynomial::monomial(*q);
            let lhs = apply_casimir(p, &x);
            let zz = apply_word(&[Generator::Zero, Generator::Zero], p, &x);
            let scale = zz.max_abs().max(cv.norm()).max(1.0);
            lhs.sub(&x.scale(cv), EXPONENT_MERGE_TOL).expect("same lattice").max_abs() / scale
        })
        .fold(0.0, f64::max)
}
