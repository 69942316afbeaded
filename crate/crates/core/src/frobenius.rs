//! Local exponents, Frobenius series and the two independent checks applied
//! to every quasi-polynomial: operator residual and series truncation.

use serde::{Deserialize, Serialize};

use crate::canonical::{classify_singularity, GenericCoefficients, Point, SingularityKind};
use crate::error::{HeunError, Result};
use crate::specmat::QuasiPolynomial;
use crate::su11::{apply_operator, graded_factor, GeneralizedPolynomial, GradedPart};
use crate::tol::Tolerances;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicialResult {
    pub point: Point,
    pub exponents: Vec<C64>,
    pub kind: SingularityKind,
    /// The exponents depend on `a8` (free-parameter cases).
    pub eigen_dependent: bool,
}

/// Roots of `a x^2 + b x + c` or of `b x + c` when `a` vanishes.
fn quadratic_or_linear(a: C64, b: C64, c: C64, point: Point, tol: &Tolerances) -> Result<Vec<C64>> {
    let scale = a.norm().max(b.norm()).max(c.norm()).max(f64::MIN_POSITIVE);
    if a.norm() > tol.zero * scale {
        let s = (b * b - 4.0 * a * c).sqrt();
        // Avoid cancellation: take the larger root directly, the other from the product.
        let q = if (b.conj() * s).re >= 0.0 { -(b + s) / 2.0 } else { -(b - s) / 2.0 };
        if q.norm() == 0.0 {
            return Ok(vec![C64::new(0.0, 0.0); 2]);
        }
        let mut roots = vec![q / a, c / q];
        roots.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        Ok(roots)
    } else if b.norm() > tol.zero * scale {
        Ok(vec![-c / b])
    } else {
        Err(HeunError::DegenerateIndicial { point })
    }
}

/// Exponents of the power-series solutions at `z = 0` (`y ~ z^rho`) or at
/// infinity (`y ~ z^{-rho}`).
///
/// `a8` is only consulted when the exponents depend on it, i.e. when the
/// lowering part (for zero) or the raising part (for infinity) is absent.
pub fn indicial_exponents(c: &GenericCoefficients, point: Point, a8: Option<C64>, tol: &Tolerances) -> Result<IndicialResult> {
    let kind = classify_singularity(c, point, tol);
    if kind == SingularityKind::Ordinary {
        return Err(HeunError::NoIndicialEquation(point));
    }
    let free = match point {
        Point::Zero => c.lowering_absent(tol),
        Point::Infinity => c.raising_absent(tol),
    };
    let (k2, k1, k0) = if free {
        let a8 = a8.ok_or(HeunError::EigenParameterRequired(point))?;
        (c[1], c[5], a8)
    } else {
        match point {
            Point::Zero => (c[2], c[6], c[9]),
            Point::Infinity => (c[0], c[4], c[7]),
        }
    };
    // Leading part on z^p is k2 p(p-1) + k1 p + k0.
    let exponents = match point {
        Point::Zero => quadratic_or_linear(k2, k1 - k2, k0, point, tol)?,
        Point::Infinity => quadratic_or_linear(k2, k2 - k1, k0, point, tol)?,
    };
    Ok(IndicialResult { point, exponents, kind, eigen_dependent: free })
}

/// Lowest graded part present: index `s` with the series equation read at `z^{rho + m - s}`.
fn lowest_shift(c: &GenericCoefficients, tol: &Tolerances) -> i64 {
    if !tol.is_zero(c[3]) {
        2
    } else if [2, 6, 9].iter().any(|&i| !tol.is_zero(c[i])) {
        1
    } else {
        0
    }
}

fn operator_scale(c: &GenericCoefficients, p: C64) -> f64 {
    c.scale() * (1.0 + p.norm()).powi(2)
}

/// Frobenius coefficients `c_0 = 1, c_1, ...`; `hint` supplies `c_m` when
/// both sides of the recurrence vanish at index `m`.
fn series_with_hint(
    c: &GenericCoefficients,
    rho: C64,
    n_terms: usize,
    hint: &[C64],
    tol: &Tolerances,
) -> Result<GeneralizedPolynomial> {
    let s = lowest_shift(c, tol);
    let lowest = GradedPart::ALL.into_iter().find(|g| g.degree() == -s).expect("shift is a graded degree");
    let f0 = graded_factor(lowest, c, rho);
    if f0.norm() > tol.identity * operator_scale(c, rho) {
        return Err(HeunError::InconsistentParameters { identity: "indicial equation at the series exponent", defect: f0.norm() });
    }
    let zero = C64::new(0.0, 0.0);
    let mut out = vec![zero; n_terms.max(1)];
    out[0] = C64::new(1.0, 0.0);
    for m in 1..out.len() {
        let mut num = zero;
        let mut mag = 0.0;
        for part in GradedPart::ALL {
            let d = part.degree();
            if d <= -s {
                continue;
            }
            let src = m as i64 - s - d;
            if src < 0 {
                continue;
            }
            let t = graded_factor(part, c, rho + src as f64) * out[src as usize];
            num -= t;
            mag += t.norm();
        }
        let q = rho + m as f64;
        let den = graded_factor(lowest, c, q);
        if den.norm() <= tol.identity * operator_scale(c, q) {
            if num.norm() <= tol.identity * mag.max(f64::MIN_POSITIVE) || mag == 0.0 {
                out[m] = hint.get(m).copied().unwrap_or(zero);
                continue;
            }
            return Err(HeunError::ResonantExponent { index: m });
        }
        out[m] = num / den;
    }
    Ok(GeneralizedPolynomial { base: rho, coeffs: out })
}

/// The first `n_terms` coefficients of the series `sum_m c_m z^{rho + m}`
/// with `c_0 = 1`, solving the equation with the given `a8`.
pub fn series_coefficients(
    c: &GenericCoefficients,
    rho: C64,
    a8: C64,
    n_terms: usize,
    tol: &Tolerances,
) -> Result<GeneralizedPolynomial> {
    series_with_hint(&c.with_a8(a8), rho, n_terms, &[], tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTail {
    pub exponent: C64,
    /// Coefficients beyond degree `N`, in the normalization of the quasi-polynomial.
    pub coefficients: Vec<C64>,
    /// Largest tail magnitude over the largest of the first `N+1` coefficients.
    pub max_relative: f64,
    /// Largest difference between the series and the quasi-polynomial up to degree `N`, same scale.
    pub leading_defect: f64,
}

/// Regenerate the series of `qp` from its lowest exponent and measure how far
/// it is from terminating after degree `N`.
pub fn verify_truncation(c: &GenericCoefficients, qp: &QuasiPolynomial, extra: usize, tol: &Tolerances) -> Result<SeriesTail> {
    let n = qp.coeffs.len() - 1;
    let j = qp.leading_index();
    let lead = qp.coeffs[j];
    let rho = qp.tau2 + j as f64;
    let hint: Vec<C64> = qp.coeffs[j..].iter().map(|x| x / lead).collect();
    let series = series_with_hint(&c.with_a8(-qp.eigen), rho, n - j + 1 + extra, &hint, tol)?;
    let scaled: Vec<C64> = series.coeffs.iter().map(|x| x * lead).collect();
    let head = qp.coeffs.iter().fold(0.0_f64, |m, x| m.max(x.norm())).max(f64::MIN_POSITIVE);
    let split = n - j + 1;
    let leading_defect = scaled[..split]
        .iter()
        .zip(&qp.coeffs[j..])
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).norm()))
        / head;
    let coefficients = scaled[split..].to_vec();
    let max_relative = coefficients.iter().fold(0.0_f64, |m, x| m.max(x.norm())) / head;
    Ok(SeriesTail { exponent: rho, coefficients, max_relative, leading_defect })
}

/// Full operator, with `a8 = -qp.eigen`, applied to the quasi-polynomial.
pub fn residual(c: &GenericCoefficients, qp: &QuasiPolynomial) -> GeneralizedPolynomial {
    apply_operator(&c.with_a8(-qp.eigen), &qp.as_generalized())
}

/// Sum of the magnitudes of the terms making up `f(p)` for every graded part.
fn term_magnitude(c: &GenericCoefficients, p: C64) -> f64 {
    let (pp, p1) = ((p * (p - 1.0)).norm(), p.norm());
    (0..3).map(|i| c[i].norm() * pp + c[i + 4].norm() * p1 + c[i + 7].norm()).sum::<f64>() + c[3].norm() * pp
}

/// Residual size relative to the operator's action: the largest residual
/// coefficient over the largest input coefficient times the largest
/// magnitude of the terms that have to cancel on any basis monomial.
pub fn relative_residual(c: &GenericCoefficients, qp: &QuasiPolynomial) -> f64 {
    let cc = c.with_a8(-qp.eigen);
    let x = qp.as_generalized();
    let res = residual(c, qp).max_abs();
    let reference = x.max_abs() * x.terms().map(|(p, _)| term_magnitude(&cc, p)).fold(0.0_f64, f64::max);
    if reference == 0.0 {
        if res == 0.0 { 0.0 } else { f64::INFINITY }
    } else {
        res / reference
    }
}

/// Fill in `residual_max`, `truncation_max` and `verified`.
///
/// A resonance while regenerating the series leaves the tail unknown, which
/// counts as unverified.
pub fn attach_metrics(c: &GenericCoefficients, qp: &mut QuasiPolynomial, extra: usize, tol: &Tolerances) {
    qp.residual_max = relative_residual(c, qp);
    qp.truncation_max = match verify_truncation(c, qp, extra, tol) {
        Ok(t) => t.max_relative.max(t.leading_defect),
        Err(_) => f64::INFINITY,
    };
    qp.verified = qp.residual_max <= tol.residual && qp.truncation_max <= tol.truncation;
}
