//! The single-equation pipeline behind `analyze` and `solve`.

use heun_core::algebraize::algebraize;
use heun_core::canonical::{to_generic_with, HeunEquation};
use heun_core::exec::Execution;
use heun_core::reps::{classify_representation, weight_data};
use heun_core::solvability::{classify, enumerate_qes_levels, per_equation_conditions};
use heun_core::specmat::paper::{cross_check, PaperMatrix, Reading};
use heun_core::specmat::{solve_batch, SolveOptions};
use heun_core::{HeunError, QesInstance, C64};

use crate::error::CliError;
use crate::job::JobSpec;
use crate::report::{Representation, RunMode, Solution, SolutionReport};

/// Relative entry tolerance for comparing printed matrices with the generic builder.
const MATRIX_REL: f64 = 1e-10;

pub fn run(job: &JobSpec, mode: RunMode) -> Result<SolutionReport, CliError> {
    let tol = job.tolerances;
    let eq = job.equation()?;
    let c = to_generic_with(&eq, &tol)?;
    let alg = algebraize(&c, &tol)?;
    let mut report = SolutionReport {
        input: job.clone(),
        mode,
        coefficients: c,
        algebraizable: alg.is_algebraizable(),
        reason: alg.reason().map(|r| r.to_string()),
        algebraization: alg.clone(),
        solvability: None,
        conditions: Vec::new(),
        solutions: Vec::new(),
        representations: Vec::new(),
        warnings: Vec::new(),
        failures: Vec::new(),
    };
    if let Some(reason) = alg.reason() {
        report.warnings.push(format!("not algebraizable: {reason}"));
        return Ok(report);
    }
    if let Ok(cond) = per_equation_conditions(&eq, &tol) {
        report.conditions = cond.lines;
    }
    let rep = classify(&c, &alg, &tol)?;
    let instances = enumerate_qes_levels(&rep, job.nmax, None);
    if instances.is_empty() {
        report.warnings.push(format!("no quasi-polynomial solutions with N <= {}", job.nmax));
    }

    let pairs: Vec<(C64, C64)> = if instances.is_empty() {
        alg.choices.iter().map(|ch| (ch.sigma.value, ch.tau.value)).collect()
    } else {
        instances.iter().map(|i| (i.sigma, i.tau)).collect()
    };
    for (sigma, tau) in pairs {
        let w = weight_data(sigma, tau);
        let classes = classify_representation(&w, &tol);
        let mut tags = vec![classes.bounded_below.tag(), classes.bounded_above.tag()];
        tags.extend(classes.finite.map(|f| f.tag()));
        report.representations.push(Representation { sigma, tau, casimir: w.casimir, classes, tags });
    }

    transcription_warnings(&eq, &instances, &mut report.warnings);
    report.solvability = Some(rep);

    if mode == RunMode::Solve {
        let opts = SolveOptions::with_tolerances(tol).with_seed(job.seed);
        let results = solve_batch(&c, &instances, &opts, Execution::Parallel);
        for (inst, result) in instances.iter().zip(results) {
            match result {
                Ok(qps) => {
                    for (k, qp) in qps.into_iter().enumerate() {
                        let finite = |x: f64| x.is_finite().then_some(x);
                        if !qp.verified {
                            report.failures.push(format!(
                                "solution {k} at N = {} failed verification (residual {:.3e}, truncation {:.3e})",
                                inst.n, qp.residual_max, qp.truncation_max
                            ));
                        }
                        report.solutions.push(Solution {
                            n: inst.n,
                            sigma: inst.sigma,
                            tau: inst.tau,
                            exponent: qp.tau2,
                            native: eq.native_eigen_parameter(qp.eigen),
                            eigenvalue: qp.eigen,
                            coefficients: qp.coeffs,
                            residual_max: finite(qp.residual_max),
                            truncation_max: finite(qp.truncation_max),
                            verified: qp.verified,
                        });
                    }
                }
                Err(e) if is_numerical(&e) => report.failures.push(format!("N = {}: {e}", inst.n)),
                Err(e) => report.warnings.push(format!("N = {}: {e}", inst.n)),
            }
        }
    }
    Ok(report)
}

fn is_numerical(e: &HeunError) -> bool {
    matches!(
        e,
        HeunError::NumericalFailure { .. } | HeunError::ClosureViolation { .. } | HeunError::InconsistentParameters { .. }
    )
}

/// Note every known misprint in the published matrices that the solved
/// levels would run into. The generic builder is used regardless.
fn transcription_warnings(eq: &HeunEquation, instances: &[QesInstance], out: &mut Vec<String>) {
    let kinds: Vec<PaperMatrix> = PaperMatrix::ALL.into_iter().filter(|k| k.family() == eq.family()).collect();
    let mut levels: Vec<usize> = instances.iter().map(|i| i.n).collect();
    levels.sort_unstable();
    levels.dedup();
    for &kind in &kinds {
        for &n in &levels {
            let Ok(cc) = cross_check(eq, kind, n, Reading::Literal, MATRIX_REL) else { continue };
            for m in &cc.mismatches {
                let line = match &m.explained_by {
                    Some(d) => format!(
                        "published {kind} matrix, {:?} band: printed `{}` should read `{}`; generic builder used",
                        d.band, d.printed, d.expected
                    ),
                    None => format!(
                        "published {kind} matrix disagrees with the generic builder at N = {n}, {:?} band entry {} ({} vs {})",
                        m.band, m.index, m.printed, m.generic
                    ),
                };
                if !out.contains(&line) {
                    out.push(line);
                }
            }
        }
    }
}
