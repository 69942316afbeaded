//! Finite invariant subspaces, their matrices and quasi-polynomial solutions.
//!
//! For an instance `(sigma, tau, N)` the monomials `z^{2 tau + k}`, `k = 0..=N`,
//! span a subspace the operator maps into itself. Column `k` of the matrix is
//! the image of `z^{2 tau + k}` under the operator minus `a8`, so solutions
//! `sum_k v_k z^{2 tau + k}` correspond to eigenpairs `M v = lambda v` with
//! `lambda = -a8`.

pub mod eigen;
pub mod paper;

use serde::{Deserialize, Serialize};

use crate::canonical::GenericCoefficients;
use crate::error::{HeunError, Result};
use crate::exec::{self, Execution};
use crate::frobenius;
use crate::solvability::QesInstance;
use crate::su11::{graded_factor, GradedPart};
use crate::tol::Tolerances;
use crate::C64;

pub use eigen::{EigenOptions, EigenPair};

/// Banded `(N+1) x (N+1)` matrix of the operator on an invariant subspace.
///
/// Basis vector `k` is `z^{base + k}` (or `z^{base - k}` when `descending`).
/// The main diagonal excludes `a8`, which is kept in `shift`; the operator on
/// the subspace is `M + shift * I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantMatrix {
    pub n: usize,
    pub base: C64,
    pub descending: bool,
    pub main: Vec<C64>,
    /// `sub[k] = M[k+1][k]`.
    pub sub: Vec<C64>,
    /// `sup[k] = M[k][k+1]`.
    pub sup: Vec<C64>,
    /// `M[k][k+2]`, present only when `a3 != 0`. The degree -2 part lowers
    /// the power by two, which in column convention lands two rows above
    /// the diagonal.
    pub sup2: Option<Vec<C64>>,
    pub shift: C64,
}

impl InvariantMatrix {
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        let zero = C64::new(0.0, 0.0);
        if i == j {
            self.main[i]
        } else if i == j + 1 {
            self.sub[j]
        } else if j == i + 1 {
            self.sup[i]
        } else if j == i + 2 {
            self.sup2.as_ref().map_or(zero, |s| s[i])
        } else {
            zero
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn bands(&self) -> eigen::Bands<'_> {
        eigen::Bands { main: &self.main, sub: &self.sub, sup: &self.sup }
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.sup2.as_ref().is_none_or(|s| s.iter().all(|x| x.norm() == 0.0))
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Same operator in the reversed basis order.
    pub fn reversed(&self) -> Self {
        let rev = |v: &Vec<C64>| v.iter().rev().copied().collect::<Vec<_>>();
        let base = if self.descending { self.base - self.n as f64 } else { self.base + self.n as f64 };
        Self {
            n: self.n,
            base,
            descending: !self.descending,
            main: rev(&self.main),
            sub: rev(&self.sup),
            sup: rev(&self.sub),
            sup2: None,
            shift: self.shift,
        }
    }
}

/// `z^{tau2} sum_k coeffs[k] z^k` together with its eigenvalue and checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiPolynomial {
    pub tau2: C64,
    pub coeffs: Vec<C64>,
    /// `-a8` for which this is a solution.
    pub eigen: C64,
    /// Largest operator-residual coefficient relative to the largest input coefficient.
    pub residual_max: f64,
    /// Largest Frobenius tail coefficient relative to the leading block.
    pub truncation_max: f64,
    pub verified: bool,
}

impl QuasiPolynomial {
    pub fn as_generalized(&self) -> crate::su11::GeneralizedPolynomial {
        crate::su11::GeneralizedPolynomial::new(self.tau2, self.coeffs.clone())
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_index(&self) -> usize {
        self.coeffs.iter().position(|c| c.norm() > 0.0).unwrap_or(0)
    }
}

fn closure_scale(c: &GenericCoefficients, p: C64) -> f64 {
    c.scale() * (1.0 + p.norm()).powi(2)
}

/// Matrix of the operator (without `a8`) on `z^{2 tau + k}`, `k = 0..=n`.
pub fn build_invariant_matrix(
    c: &GenericCoefficients,
    sigma: C64,
    tau: C64,
    n: usize,
    tol: &Tolerances,
) -> Result<InvariantMatrix> {
    let level = 2.0 * (sigma - tau);
    if (level - n as f64).norm() > tol.half_integer {
        return Err(HeunError::NotAnInstance { value: level.to_string(), n });
    }
    let has_mm = !tol.is_zero(c[3]);
    if has_mm && n > 0 {
        return Err(HeunError::Unsupported(format!(
            "a3 != 0 only admits the singlet subspace, requested N = {n}"
        )));
    }
    let base = 2.0 * tau;
    let top = base + n as f64;
    let up = graded_factor(GradedPart::Plus, c, top);
    if up.norm() > tol.identity * closure_scale(c, top) {
        return Err(HeunError::ClosureViolation { which: "raising image of the top monomial", defect: up.norm() });
    }
    let down = graded_factor(GradedPart::Minus, c, base);
    if down.norm() > tol.identity * closure_scale(c, base) {
        return Err(HeunError::ClosureViolation { which: "lowering image of the bottom monomial", defect: down.norm() });
    }
    let c0 = c.with_a8(C64::new(0.0, 0.0));
    let p = |k: usize| base + k as f64;
    let main = (0..=n).map(|k| graded_factor(GradedPart::Zero, &c0, p(k))).collect();
    let sub = (0..n).map(|k| graded_factor(GradedPart::Plus, c, p(k))).collect();
    let sup = (1..=n).map(|k| graded_factor(GradedPart::Minus, c, p(k))).collect();
    let sup2 = has_mm.then(|| (2..=n).map(|k| graded_factor(GradedPart::MinusMinus, c, p(k))).collect());
    Ok(InvariantMatrix { n, base, descending: false, main, sub, sup, sup2, shift: c[8] })
}

pub fn eigen_tridiagonal(m: &InvariantMatrix, opts: &EigenOptions) -> Result<Vec<EigenPair>> {
    if !m.is_tridiagonal() {
        return Err(HeunError::Unsupported("matrix has a nonzero second super-diagonal".into()));
    }
    eigen::eigen_bands(m.bands(), opts)
}

/// Settings for [`quasi_polynomials`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: Tolerances,
    pub eigen: EigenOptions,
    /// Extra Frobenius terms examined beyond degree `N`.
    pub extra_terms: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        let tol = Tolerances::default();
        Self { tol, eigen: EigenOptions { residual_tol: tol.eigen_residual, ..Default::default() }, extra_terms: 20 }
    }
}

impl SolveOptions {
    pub fn with_tolerances(tol: Tolerances) -> Self {
        Self { tol, eigen: EigenOptions { residual_tol: tol.eigen_residual, ..Default::default() }, extra_terms: 20 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.eigen.seed = seed;
        self
    }
}

/// Scale so the first entry above `rel * max` becomes exactly 1.
fn normalize_leading(v: &[C64]) -> Vec<C64> {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.norm()));
    let Some(k) = v.iter().position(|x| x.norm() > 1e-13 * max) else {
        return v.to_vec();
    };
    let pivot = v[k];
    let mut out: Vec<C64> = v.iter().map(|x| x / pivot).collect();
    for x in out.iter_mut().take(k) {
        *x = C64::new(0.0, 0.0);
    }
    out[k] = C64::new(1.0, 0.0);
    out
}

/// The `N+1` quasi-polynomial solutions of one instance, each checked by
/// operator residual and Frobenius truncation.
pub fn quasi_polynomials(c: &GenericCoefficients, inst: &QesInstance, opts: &SolveOptions) -> Result<Vec<QuasiPolynomial>> {
    let m = build_invariant_matrix(c, inst.sigma, inst.tau, inst.n, &opts.tol)?;
    let pairs = eigen_tridiagonal(&m, &opts.eigen)?;
    Ok(pairs
        .into_iter()
        .map(|p| {
            let mut qp = QuasiPolynomial {
                tau2: m.base,
                coeffs: normalize_leading(&p.vector),
                eigen: p.value,
                residual_max: f64::NAN,
                truncation_max: f64::NAN,
                verified: false,
            };
            frobenius::attach_metrics(c, &mut qp, opts.extra_terms, &opts.tol);
            qp
        })
        .collect())
}

/// Solve many instances, in parallel when enabled. Results keep input order.
pub fn solve_batch(
    c: &GenericCoefficients,
    instances: &[QesInstance],
    opts: &SolveOptions,
    exec: Execution,
) -> Vec<Result<Vec<QuasiPolynomial>>> {
    exec::map(exec, instances, |inst| quasi_polynomials(c, inst, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraize::{algebraize, Branch};
    use crate::c64;
    use crate::canonical::*;
    use crate::solvability::{classify, enumerate_qes_levels};

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    fn inst(sigma: C64, tau: C64, n: usize) -> QesInstance {
        QesInstance { sigma, tau, n, sigma_branch: Branch::Chosen, tau_branch: Branch::Chosen }
    }

    #[test]
    fn diagonal_dhe_singlet() {
        let tol = Tolerances::default();
        let c = GenericCoefficients::from_real([0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let tau = c64(0.35, -0.2);
        let m = build_invariant_matrix(&c, tau, tau, 0, &tol).unwrap();
        assert_eq!(m.main.len(), 1);
        assert!((m.main[0] - (2.0 * tau).powi(2)).norm() < 1e-15);

        let qps = quasi_polynomials(&c, &inst(r(1.0), r(1.0), 0), &SolveOptions::default()).unwrap();
        assert_eq!(qps.len(), 1);
        assert_eq!(qps[0].tau2, r(2.0));
        assert!((qps[0].eigen - 4.0).norm() < 1e-14);
        assert!(qps[0].verified);
    }

    #[test]
    fn ghe_constant_solution() {
        let tol = Tolerances::default();
        let p = GeneralHeunParams::new(r(0.4), r(1.3), r(0.0), r(0.6), r(0.0), r(2.0));
        let c = to_generic(&HeunEquation::Ghe(p)).unwrap();
        let m = build_invariant_matrix(&c, r(0.0), r(0.0), 0, &tol).unwrap();
        assert_eq!(m.main, vec![r(0.0)]);
        let qps = quasi_polynomials(&c, &inst(r(0.0), r(0.0), 0), &SolveOptions::default()).unwrap();
        assert_eq!(qps[0].eigen, r(0.0));
        assert_eq!(qps[0].coeffs, vec![r(1.0)]);
    }

    #[test]
    fn che_two_by_two_by_hand() {
        // kappa = gamma = delta = 1, mu + nu = -1, tau = 0, N = 1:
        // H 1 = (z - 1) ... gives column [0, -1]; H z = (-1 - z) + ... by hand below.
        let tol = Tolerances::default();
        let p = ConfluentHeunParams { kappa: r(1.0), gamma: r(1.0), delta: r(1.0), mu: r(0.0), nu: r(-1.0) };
        let c = to_generic(&HeunEquation::Che(p)).unwrap();
        let m = build_invariant_matrix(&c, r(0.5), r(0.0), 1, &tol).unwrap();
        // P3 = z^2 - z, P2 = z^2 + z - 1, P1 = -z (a8 = 0 here).
        // y = 1: P1 = -z        -> column (0, -1)
        // y = z: P2 + P1 z = z - 1 -> column (-1, 1)
        let dense = m.to_dense();
        assert_eq!(dense, vec![vec![r(0.0), r(-1.0)], vec![r(-1.0), r(1.0)]]);
        let qps = quasi_polynomials(&c, &inst(r(0.5), r(0.0), 1), &SolveOptions::default()).unwrap();
        assert_eq!(qps.len(), 2);
        assert!((qps[0].eigen - qps[1].eigen).norm() > 1e-3);
        for q in &qps {
            assert!(q.residual_max <= 1e-9 && q.verified, "{q:?}");
        }
    }

    #[test]
    fn rejects_non_instances_and_broken_closure() {
        let tol = Tolerances::default();
        let p = GeneralHeunParams::new(r(0.4), r(1.3), r(-2.0), r(0.6), r(0.0), r(2.0));
        let c = to_generic(&HeunEquation::Ghe(p)).unwrap();
        assert!(matches!(
            build_invariant_matrix(&c, r(1.0), r(0.0), 3, &tol),
            Err(HeunError::NotAnInstance { .. })
        ));
        assert!(matches!(
            build_invariant_matrix(&c, r(1.5), r(0.0), 3, &tol),
            Err(HeunError::ClosureViolation { .. })
        ));
        assert!(build_invariant_matrix(&c, r(1.0), r(0.0), 2, &tol).is_ok());
    }

    #[test]
    fn the_singlet_only() {
        let tol = Tolerances::default();
        let t = TriconfluentHeunParams { alpha: r(0.5), beta: r(1.0), gamma: r(0.3) };
        let c = to_generic(&HeunEquation::The(t)).unwrap();
        let alg = algebraize(&c, &tol).unwrap();
        let rep = classify(&c, &alg, &tol).unwrap();
        let levels = enumerate_qes_levels(&rep, 4, None);
        assert_eq!(levels.len(), 1);
        let qps = quasi_polynomials(&c, &levels[0], &SolveOptions::default()).unwrap();
        assert_eq!(qps.len(), 1);
        assert_eq!(qps[0].eigen, r(0.0));
        assert!(qps[0].verified);
        assert!(matches!(build_invariant_matrix(&c, r(0.5), r(0.0), 1, &tol), Err(HeunError::NotAnInstance { .. } | HeunError::Unsupported(_))));
    }

    #[test]
    fn reversed_twice_is_identity() {
        let tol = Tolerances::default();
        let p = BiconfluentHeunParams { alpha: r(0.3), beta: r(1.1), gamma: r(8.3), delta: r(0.0) };
        let c = to_generic(&HeunEquation::Bhe(p)).unwrap();
        let m = build_invariant_matrix(&c, r(1.5), r(0.0), 3, &tol).unwrap();
        let back = m.reversed().reversed();
        assert_eq!(back.to_dense(), m.to_dense());
        assert_eq!(back.base, m.base);
        assert_eq!(m.reversed().get(0, 0), m.get(3, 3));
        assert_eq!(m.reversed().get(0, 1), m.get(3, 2));
    }

    #[test]
    fn batch_matches_single() {
        let p = BiconfluentHeunParams { alpha: r(0.3), beta: r(1.1), gamma: r(8.3), delta: r(0.0) };
        let c = to_generic(&HeunEquation::Bhe(p)).unwrap();
        let insts = vec![inst(r(1.5), r(0.0), 3), inst(r(1.0), r(0.0), 3)];
        let opts = SolveOptions::default();
        let seq = solve_batch(&c, &insts, &opts, Execution::Sequential);
        let par = solve_batch(&c, &insts, &opts, Execution::Parallel);
        assert_eq!(seq, par);
        assert!(seq[0].is_ok() && seq[1].is_err());
    }
}
