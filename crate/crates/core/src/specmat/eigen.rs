//! Eigenpairs of small complex non-Hermitian tridiagonal matrices.
//!
//! Eigenvalues are the roots of the characteristic polynomial, evaluated with
//! the three-term determinant recurrence and found by Aberth simultaneous
//! iteration. Eigenvectors come from inverse iteration with a pivoted
//! tridiagonal LU.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HeunError, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    /// Seed of the perturbation applied to the initial root guesses.
    pub seed: u64,
    pub max_iter: usize,
    /// Fresh starts with new random guesses before giving up.
    pub restarts: usize,
    /// Eigenpair residual bound, relative to `max(1, ||M||_inf)`.
    pub residual_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { seed: 0, max_iter: 500, restarts: 4, residual_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: C64,
    /// Scaled so that its entry of largest modulus is exactly 1.
    pub vector: Vec<C64>,
    /// `||M v - lambda v||_inf`.
    pub residual: f64,
}

/// Borrowed view of a tridiagonal matrix: `sub[k] = M[k+1][k]`, `sup[k] = M[k][k+1]`.
#[derive(Debug, Clone, Copy)]
pub struct Bands<'a> {
    pub main: &'a [C64],
    pub sub: &'a [C64],
    pub sup: &'a [C64],
}

impl Bands<'_> {
    pub fn dim(&self) -> usize {
        self.main.len()
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let mut s = self.main[i].norm();
                if i > 0 {
                    s += self.sub[i - 1].norm();
                }
                if i + 1 < self.dim() {
                    s += self.sup[i].norm();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.main[i] * v[i];
                if i > 0 {
                    s += self.sub[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.sup[i] * v[i + 1];
                }
                s
            })
            .collect()
    }
}

/// `det(lambda I - M)` and its derivative, both scaled by a common positive
/// factor when the raw values would overflow or underflow. The ratio is exact.
pub fn char_poly(b: Bands<'_>, lambda: C64) -> (C64, C64) {
    const BIG: f64 = 1e150;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (mut p0, mut d0) = (one, zero);
    let (mut p1, mut d1) = (lambda - b.main[0], one);
    for k in 1..b.dim() {
        let off = b.sub[k - 1] * b.sup[k - 1];
        let t = lambda - b.main[k];
        let p2 = t * p1 - off * p0;
        let d2 = p1 + t * d1 - off * d0;
        p0 = p1;
        d0 = d1;
        p1 = p2;
        d1 = d2;
        let m = p1.norm().max(d1.norm());
        if m > BIG || (m < 1.0 / BIG && m > 0.0) {
            let s = 1.0 / m;
            p0 *= s;
            d0 *= s;
            p1 *= s;
            d1 *= s;
        }
    }
    (p1, d1)
}

/// Coefficients of `det(lambda I - M)` in ascending powers of `lambda`.
pub fn char_poly_coefficients(b: Bands<'_>) -> Vec<C64> {
    let mut p0 = vec![C64::new(1.0, 0.0)];
    let mut p1 = vec![-b.main[0], C64::new(1.0, 0.0)];
    for k in 1..b.dim() {
        let off = b.sub[k - 1] * b.sup[k - 1];
        let mut p2 = vec![C64::new(0.0, 0.0); k + 2];
        for (i, c) in p1.iter().enumerate() {
            p2[i + 1] += c;
            p2[i] -= b.main[k] * c;
        }
        for (i, c) in p0.iter().enumerate() {
            p2[i] -= off * c;
        }
        p0 = p1;
        p1 = p2;
    }
    p1
}

fn initial_guesses(b: Bands<'_>, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let n = b.dim();
    let center = b.main.iter().sum::<C64>() / n as f64;
    let mut radius: f64 = 0.0;
    for i in 0..n {
        let mut r = (b.main[i] - center).norm();
        if i > 0 {
            r += b.sub[i - 1].norm();
        }
        if i + 1 < n {
            r += b.sup[i].norm();
        }
        radius = radius.max(r);
    }
    let radius = radius.max(1e-3 * (1.0 + center.norm()));
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (0..n)
        .map(|k| {
            let theta = phase + std::f64::consts::TAU * k as f64 / n as f64;
            let r = radius * rng.random_range(0.5..1.0);
            center + C64::from_polar(r, theta)
        })
        .collect()
}

fn aberth(b: Bands<'_>, z: &mut [C64], max_iter: usize, scale: f64) -> bool {
    let n = z.len();
    let eps = f64::EPSILON;
    for _ in 0..max_iter {
        let mut done = true;
        for i in 0..n {
            let (p, dp) = char_poly(b, z[i]);
            if p == C64::new(0.0, 0.0) {
                continue;
            }
            let ratio = if dp == C64::new(0.0, 0.0) {
                // Stationary point: nudge instead of dividing by zero.
                C64::new(eps * scale, eps * scale)
            } else {
                p / dp
            };
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return false;
            }
            z[i] -= w;
            if w.norm() > 4.0 * eps * (z[i].norm() + scale) {
                done = false;
            }
        }
        if done {
            return true;
        }
    }
    false
}

/// Solve `(M - lambda I) x = rhs` by tridiagonal LU with partial pivoting.
fn shifted_solve(b: Bands<'_>, lambda: C64, rhs: &mut [C64], tiny: f64) {
    let n = b.dim();
    let mut d: Vec<C64> = b.main.iter().map(|x| x - lambda).collect();
    let mut dl: Vec<C64> = b.sub.to_vec();
    let mut du: Vec<C64> = b.sup.to_vec();
    let mut du2 = vec![C64::new(0.0, 0.0); n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if d[i].norm() >= dl[i].norm() {
            if d[i].norm() > 0.0 {
                let f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                dl[i] = C64::new(0.0, 0.0);
            }
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let t = du[i];
            du[i] = d[i + 1];
            d[i + 1] = t - f * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    for x in d.iter_mut() {
        if x.norm() < tiny {
            *x = C64::new(tiny, 0.0);
        }
    }
    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            let t = rhs[i];
            rhs[i] = rhs[i + 1];
            rhs[i + 1] = t - dl[i] * rhs[i];
        } else {
            let t = dl[i] * rhs[i];
            rhs[i + 1] -= t;
        }
    }
    rhs[n - 1] /= d[n - 1];
    if n > 1 {
        rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
    }
}

fn normalize_inf(v: &mut [C64]) {
    let (k, _) = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |(bk, bm), (k, x)| if x.norm() > bm { (k, x.norm()) } else { (bk, bm) });
    let pivot = v[k];
    if pivot.norm() > 0.0 {
        for x in v.iter_mut() {
            *x /= pivot;
        }
        v[k] = C64::new(1.0, 0.0);
    }
}

fn residual(b: Bands<'_>, lambda: C64, v: &[C64]) -> f64 {
    b.mul_vec(v)
        .iter()
        .zip(v)
        .map(|(mv, x)| (mv - lambda * x).norm())
        .fold(0.0, f64::max)
}

fn eigenvector(b: Bands<'_>, lambda: C64, scale: f64, rng: &mut ChaCha8Rng) -> (Vec<C64>, f64) {
    let n = b.dim();
    let tiny = f64::EPSILON * scale;
    let mut v: Vec<C64> = (0..n)
        .map(|_| C64::new(1.0 + 0.1 * rng.random::<f64>(), 0.1 * rng.random::<f64>()))
        .collect();
    let mut best = (v.clone(), f64::INFINITY);
    for _ in 0..4 {
        shifted_solve(b, lambda, &mut v, tiny);
        if v.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            break;
        }
        normalize_inf(&mut v);
        let r = residual(b, lambda, &v);
        if r < best.1 {
            best = (v.clone(), r);
        }
    }
    best
}

fn lex_cmp(a: &EigenPair, b: &EigenPair) -> std::cmp::Ordering {
    a.value
        .re
        .total_cmp(&b.value.re)
        .then(a.value.im.total_cmp(&b.value.im))
        .then_with(|| {
            for (x, y) in a.vector.iter().zip(&b.vector) {
                let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
                if o.is_ne() {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// All eigenpairs of the tridiagonal matrix, sorted by real part, then
/// imaginary part, then eigenvector.
pub fn eigen_bands(b: Bands<'_>, opts: &EigenOptions) -> Result<Vec<EigenPair>> {
    let n = b.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let norm = b.norm_inf();
    let scale = norm.max(1.0);
    let bound = opts.residual_tol * scale;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = f64::INFINITY;
    for _ in 0..=opts.restarts {
        let mut z = if n == 1 { vec![b.main[0]] } else { initial_guesses(b, &mut rng) };
        if n > 1 && !aberth(b, &mut z, opts.max_iter, scale) && z.iter().any(|x| !x.re.is_finite()) {
            continue;
        }
        let mut pairs = Vec::with_capacity(n);
        worst = 0.0;
        for i in 0..n {
            let (mut v, mut r) = eigenvector(b, z[i], scale, &mut rng);
            let mut lambda = z[i];
            if r > bound {
                // Clustered roots of a nearly defective matrix are individually
                // poor but their mean is accurate.
                let cluster: Vec<C64> = z.iter().copied().filter(|w| (w - z[i]).norm() <= 1e-5 * scale).collect();
                if cluster.len() > 1 {
                    let mean = cluster.iter().sum::<C64>() / cluster.len() as f64;
                    let (v2, r2) = eigenvector(b, mean, scale, &mut rng);
                    if r2 < r {
                        v = v2;
                        r = r2;
                        lambda = mean;
                    }
                }
            }
            worst = worst.max(r);
            pairs.push(EigenPair { value: lambda, vector: v, residual: r });
        }
        if worst <= bound {
            pairs.sort_by(lex_cmp);
            return Ok(pairs);
        }
    }
    Err(HeunError::NumericalFailure { message: format!("eigenpairs of a {n}x{n} tridiagonal matrix did not converge"), defect: worst })
}
