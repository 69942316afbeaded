//! Quasi-exact and exact solvability.
//!
//! A pair `(sigma, tau)` yields a finite invariant subspace spanned by
//! `z^{2 tau}, ..., z^{2 sigma}` exactly when `2(sigma - tau) = N` is a
//! non-negative integer. A free `sigma` (no raising part) or a free `tau` (no
//! lowering part) gives such a subspace for every `N`.

use serde::{Deserialize, Serialize};

use crate::algebraize::{AlgebraizationResult, Branch, NonAlgebraizableReason, ParamResolution, Root};
use crate::canonical::{to_generic_with, GenericCoefficients, HeunEquation};
use crate::error::{HeunError, Result};
use crate::su11::{graded_factor, GradedPart};
use crate::tol::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QesInstance {
    pub sigma: C64,
    pub tau: C64,
    pub n: usize,
    pub sigma_branch: Branch,
    pub tau_branch: Branch,
}

impl QesInstance {
    /// Exponent of the lowest monomial, `2 tau`.
    pub fn tau2(&self) -> C64 {
        2.0 * self.tau
    }

    /// `2(sigma - tau) - N`, zero for a genuine instance.
    pub fn level_defect(&self) -> f64 {
        (2.0 * (self.sigma - self.tau) - self.n as f64).norm()
    }

    /// Form of the solutions this instance produces.
    pub fn describe(&self) -> String {
        let t = self.tau2();
        format!("z^({:.6}{:+.6}i) P_{}(z)", t.re, t.im, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvabilityMode {
    NotSolvableByQuasiPolynomials,
    QuasiExact(Vec<QesInstance>),
    /// Raising part absent; every `tau` root combines with `sigma = tau + N/2`.
    ExactSigmaFree { taus: Vec<Root> },
    /// Lowering part absent; every `sigma` root combines with `tau = sigma - N/2`.
    ExactTauFree { sigmas: Vec<Root> },
    /// Only the degree 0 part survives: every monomial is an eigenfunction.
    FullyDiagonal,
}

impl SolvabilityMode {
    pub fn tag(&self) -> &'static str {
        match self {
            SolvabilityMode::NotSolvableByQuasiPolynomials => "none",
            SolvabilityMode::QuasiExact(_) => "quasi_exact",
            SolvabilityMode::ExactSigmaFree { .. } => "exact_sigma_free",
            SolvabilityMode::ExactTauFree { .. } => "exact_tau_free",
            SolvabilityMode::FullyDiagonal => "fully_diagonal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    pub mode: SolvabilityMode,
    pub coefficients: GenericCoefficients,
}

impl SolvabilityReport {
    /// For the fully diagonal case: the value of `-a8` making `z^p` a solution.
    pub fn diagonal_eigenvalue(&self, exponent: C64) -> C64 {
        graded_factor(GradedPart::Zero, &self.coefficients.with_a8(C64::new(0.0, 0.0)), exponent)
    }

    /// Distinct `(N, 2 tau)` levels of a quasi-exact report.
    pub fn levels(&self) -> Vec<(usize, C64)> {
        match &self.mode {
            SolvabilityMode::QuasiExact(v) => v.iter().map(|i| (i.n, i.tau2())).collect(),
            _ => Vec::new(),
        }
    }
}

/// `Some(N)` when `v` is within `tol.half_integer` of a non-negative integer.
pub fn level(v: C64, tol: &Tolerances) -> Option<usize> {
    let n = v.re.round();
    (n >= 0.0 && (v - n).norm() <= tol.half_integer).then_some(n as usize)
}

fn push_dedup(out: &mut Vec<QesInstance>, inst: QesInstance, tol: &Tolerances) {
    let dup = out
        .iter()
        .any(|o| o.n == inst.n && (o.tau2() - inst.tau2()).norm() <= tol.half_integer);
    if !dup {
        out.push(inst);
    }
}

pub fn classify(c: &GenericCoefficients, alg: &AlgebraizationResult, tol: &Tolerances) -> Result<SolvabilityReport> {
    if let Some(reason) = alg.reason() {
        return Err(HeunError::NotAlgebraizable(reason));
    }
    let mode = match (&alg.sigma, &alg.tau) {
        (ParamResolution::Free, ParamResolution::Free) => SolvabilityMode::FullyDiagonal,
        (ParamResolution::Free, t) => SolvabilityMode::ExactSigmaFree { taus: t.roots().to_vec() },
        (s, ParamResolution::Free) => SolvabilityMode::ExactTauFree { sigmas: s.roots().to_vec() },
        (s, t) => {
            let mut found = Vec::new();
            for sr in s.roots() {
                for tr in t.roots() {
                    if let Some(n) = level(2.0 * (sr.value - tr.value), tol) {
                        let inst = QesInstance {
                            sigma: sr.value,
                            tau: tr.value,
                            n,
                            sigma_branch: sr.branch,
                            tau_branch: tr.branch,
                        };
                        push_dedup(&mut found, inst, tol);
                    }
                }
            }
            if found.is_empty() {
                SolvabilityMode::NotSolvableByQuasiPolynomials
            } else {
                SolvabilityMode::QuasiExact(found)
            }
        }
    };
    Ok(SolvabilityReport { mode, coefficients: *c })
}

/// Concrete instances with `N <= nmax`.
///
/// `free_choice` fixes the otherwise arbitrary exponent parameter of the fully
/// diagonal case (`tau`, default 0).
pub fn enumerate_qes_levels(report: &SolvabilityReport, nmax: usize, free_choice: Option<C64>) -> Vec<QesInstance> {
    let half = |n: usize| n as f64 / 2.0;
    match &report.mode {
        SolvabilityMode::NotSolvableByQuasiPolynomials => Vec::new(),
        SolvabilityMode::QuasiExact(v) => v.iter().filter(|i| i.n <= nmax).copied().collect(),
        SolvabilityMode::ExactSigmaFree { taus } => taus
            .iter()
            .flat_map(|t| {
                (0..=nmax).map(move |n| QesInstance {
                    sigma: t.value + half(n),
                    tau: t.value,
                    n,
                    sigma_branch: Branch::Chosen,
                    tau_branch: t.branch,
                })
            })
            .collect(),
        SolvabilityMode::ExactTauFree { sigmas } => sigmas
            .iter()
            .flat_map(|s| {
                (0..=nmax).map(move |n| QesInstance {
                    sigma: s.value,
                    tau: s.value - half(n),
                    n,
                    sigma_branch: s.branch,
                    tau_branch: Branch::Chosen,
                })
            })
            .collect(),
        SolvabilityMode::FullyDiagonal => {
            let tau = free_choice.unwrap_or(C64::new(0.0, 0.0));
            vec![QesInstance { sigma: tau, tau, n: 0, sigma_branch: Branch::Chosen, tau_branch: Branch::Chosen }]
        }
    }
}

/// Outcome of the closed-form conditions of one equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotAlgebraizable(NonAlgebraizableReason),
    /// Fired `(N, 2 tau)` levels; empty when no condition holds.
    Levels(Vec<(usize, C64)>),
    ExactSigmaFree { tau2: Vec<C64> },
    ExactTauFree { sigma2: Vec<C64> },
    FullyDiagonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub lines: Vec<String>,
}

impl ConditionReport {
    pub fn text(&self) -> String {
        self.lines.join("\n")
    }
}

struct Collector<'a> {
    tol: &'a Tolerances,
    levels: Vec<(usize, C64)>,
    lines: Vec<String>,
}

impl Collector<'_> {
    fn check(&mut self, label: &str, value: C64, tau2: C64) {
        match level(value, self.tol) {
            Some(n) => {
                self.lines.push(format!("{label} = N holds with N = {n}: quasi-polynomial z^(2tau) P_{n}, 2tau = {tau2}"));
                if !self.levels.iter().any(|(m, t)| *m == n && (t - tau2).norm() <= self.tol.half_integer) {
                    self.levels.push((n, tau2));
                }
            }
            None => self.lines.push(format!("{label} = {value} is not a non-negative integer")),
        }
    }

    fn finish(self) -> ConditionReport {
        ConditionReport { verdict: Verdict::Levels(self.levels), lines: self.lines }
    }
}

/// Evaluate each family's own closed-form solvability conditions.
pub fn per_equation_conditions(eq: &HeunEquation, tol: &Tolerances) -> Result<ConditionReport> {
    let c = to_generic_with(eq, tol)?;
    let z = |x: C64| tol.is_zero(x);
    let mut col = Collector { tol, levels: Vec::new(), lines: Vec::new() };
    let zero = C64::new(0.0, 0.0);
    match *eq {
        HeunEquation::Ghe(p) => {
            let t2 = 1.0 - p.gamma;
            col.check("-alpha", -p.alpha, zero);
            col.check("-beta", -p.beta, zero);
            col.check("gamma - 1 - alpha", p.gamma - 1.0 - p.alpha, t2);
            col.check("gamma - 1 - beta", p.gamma - 1.0 - p.beta, t2);
            Ok(col.finish())
        }
        HeunEquation::Che(p) => {
            let t2 = 1.0 - p.gamma;
            let s = p.mu + p.nu;
            if z(p.kappa) {
                if z(s) {
                    return Ok(ConditionReport {
                        verdict: Verdict::ExactSigmaFree { tau2: dedup(vec![zero, t2], tol) },
                        lines: vec!["kappa = mu + nu = 0: sigma free, exactly solvable (hypergeometric)".into()],
                    });
                }
                return Ok(not_algebraizable(NonAlgebraizableReason::RaisingPart, "kappa = 0 with mu + nu != 0"));
            }
            col.check("-(mu + nu)/kappa", -s / p.kappa, zero);
            col.check("-(mu + nu)/kappa - (1 - gamma)", -s / p.kappa - t2, t2);
            Ok(col.finish())
        }
        HeunEquation::Bhe(p) => {
            col.check("(gamma - alpha - 2)/2", (p.gamma - p.alpha - 2.0) / 2.0, zero);
            col.check("(gamma + alpha - 2)/2", (p.gamma + p.alpha - 2.0) / 2.0, -p.alpha);
            Ok(col.finish())
        }
        HeunEquation::Dhe(p) => {
            let sigma_free = z(p.alpha1);
            let tau_free = z(p.alpham1);
            if sigma_free && !z(c[7]) {
                return Ok(not_algebraizable(NonAlgebraizableReason::RaisingPart, "alpha1 = 0 with B1 != 0"));
            }
            if tau_free && !z(c[9]) {
                return Ok(not_algebraizable(NonAlgebraizableReason::LoweringPart, "alpha-1 = 0 with B-1 != 0"));
            }
            // 2 sigma = -(B1/alpha1 + 1/2), 2 tau = -(B-1/alpha-1 - 1/2)
            let s2 = || -(p.b1 / p.alpha1 + 0.5);
            let t2 = || -(p.bm1 / p.alpham1 - 0.5);
            match (sigma_free, tau_free) {
                (true, true) => Ok(ConditionReport {
                    verdict: Verdict::FullyDiagonal,
                    lines: vec!["alpha1 = B1 = alpha-1 = B-1 = 0: every monomial z^c solves with -B0 = c^2".into()],
                }),
                (true, false) => Ok(ConditionReport {
                    verdict: Verdict::ExactSigmaFree { tau2: vec![t2()] },
                    lines: vec![format!("alpha1 = B1 = 0: sigma free, exactly solvable with 2tau = {}", t2())],
                }),
                (false, true) => Ok(ConditionReport {
                    verdict: Verdict::ExactTauFree { sigma2: vec![s2()] },
                    lines: vec![format!("alpha-1 = B-1 = 0: tau free, exactly solvable with 2sigma = {}", s2())],
                }),
                (false, false) => {
                    col.check("-(B1/alpha1 + 1/2) + (B-1/alpha-1 - 1/2)", s2() - t2(), t2());
                    Ok(col.finish())
                }
            }
        }
        HeunEquation::The(_) => Ok(ConditionReport {
            verdict: Verdict::Levels(vec![(0, zero)]),
            lines: vec!["singlet: constant solution only, requires alpha + beta - 3 = 0".into()],
        }),
    }
}

fn dedup(v: Vec<C64>, tol: &Tolerances) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    for x in v {
        if !out.iter().any(|o| (o - x).norm() <= tol.half_integer) {
            out.push(x);
        }
    }
    out
}

fn not_algebraizable(reason: NonAlgebraizableReason, why: &str) -> ConditionReport {
    ConditionReport { verdict: Verdict::NotAlgebraizable(reason), lines: vec![format!("{why}: not algebraizable ({reason})")] }
}

/// Express a classification in the same shape as [`Verdict`] for comparison.
pub fn verdict_of(report: &Result<SolvabilityReport>) -> Option<Verdict> {
    match report {
        Err(HeunError::NotAlgebraizable(r)) => Some(Verdict::NotAlgebraizable(*r)),
        Err(_) => None,
        Ok(rep) => Some(match &rep.mode {
            SolvabilityMode::NotSolvableByQuasiPolynomials => Verdict::Levels(Vec::new()),
            SolvabilityMode::QuasiExact(_) => Verdict::Levels(rep.levels()),
            SolvabilityMode::ExactSigmaFree { taus } => {
                Verdict::ExactSigmaFree { tau2: taus.iter().map(|t| 2.0 * t.value).collect() }
            }
            SolvabilityMode::ExactTauFree { sigmas } => {
                Verdict::ExactTauFree { sigma2: sigmas.iter().map(|s| 2.0 * s.value).collect() }
            }
            SolvabilityMode::FullyDiagonal => Verdict::FullyDiagonal,
        }),
    }
}

/// Set equality of two verdicts, comparing exponents to `eps`.
pub fn verdicts_agree(a: &Verdict, b: &Verdict, eps: f64) -> bool {
    fn same_set<T>(x: &[T], y: &[T], eq: impl Fn(&T, &T) -> bool) -> bool {
        x.iter().all(|u| y.iter().any(|v| eq(u, v))) && y.iter().all(|v| x.iter().any(|u| eq(u, v)))
    }
    let close = |u: &C64, v: &C64| (u - v).norm() <= eps;
    match (a, b) {
        (Verdict::NotAlgebraizable(x), Verdict::NotAlgebraizable(y)) => x == y,
        (Verdict::Levels(x), Verdict::Levels(y)) => same_set(x, y, |u, v| u.0 == v.0 && close(&u.1, &v.1)),
        (Verdict::ExactSigmaFree { tau2: x }, Verdict::ExactSigmaFree { tau2: y }) => same_set(x, y, close),
        (Verdict::ExactTauFree { sigma2: x }, Verdict::ExactTauFree { sigma2: y }) => same_set(x, y, close),
        (Verdict::FullyDiagonal, Verdict::FullyDiagonal) => true,
        _ => false,
    }
}
