//! The JSON report of `analyze` and `solve`, and CSV views of it.

use heun_core::algebraize::AlgebraizationResult;
use heun_core::canonical::{EigenParameter, GenericCoefficients};
use heun_core::reps::HostClasses;
use heun_core::{SolvabilityReport, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::job::JobSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Analyze,
    Solve,
}

/// One quasi-polynomial `z^exponent sum_k coefficients[k] z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub n: usize,
    pub sigma: C64,
    pub tau: C64,
    pub exponent: C64,
    pub coefficients: Vec<C64>,
    /// `-a8` for which the quasi-polynomial solves the equation.
    pub eigenvalue: C64,
    /// The same eigenvalue expressed through the family's own parameter.
    pub native: EigenParameter,
    /// `None` when the check could not be carried out (non-finite value).
    pub residual_max: Option<f64>,
    pub truncation_max: Option<f64>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    pub sigma: C64,
    pub tau: C64,
    pub casimir: C64,
    pub classes: HostClasses,
    /// Short labels: the bounded-below class, the bounded-above class and the finite piece.
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub input: JobSpec,
    pub mode: RunMode,
    pub coefficients: GenericCoefficients,
    pub algebraizable: bool,
    pub reason: Option<String>,
    pub algebraization: AlgebraizationResult,
    pub solvability: Option<SolvabilityReport>,
    /// The family's closed-form solvability conditions, one line each.
    pub conditions: Vec<String>,
    pub solutions: Vec<Solution>,
    pub representations: Vec<Representation>,
    pub warnings: Vec<String>,
    /// Numerical problems; a non-empty list makes the run exit with code 3.
    pub failures: Vec<String>,
}

impl SolutionReport {
    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("report: {e}")))
    }

    /// One row per solution.
    pub fn solutions_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = [
            "n", "exponent_re", "exponent_im", "eigenvalue_re", "eigenvalue_im", "residual_max", "truncation_max", "verified",
        ];
        w.write_record(header).map_err(csv_err)?;
        for s in &self.solutions {
            let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
            w.write_record([
                s.n.to_string(),
                s.exponent.re.to_string(),
                s.exponent.im.to_string(),
                s.eigenvalue.re.to_string(),
                s.eigenvalue.im.to_string(),
                opt(s.residual_max),
                opt(s.truncation_max),
                s.verified.to_string(),
            ])
            .map_err(csv_err)?;
        }
        finish(w)
    }
}

pub(crate) fn csv_err(e: csv::Error) -> CliError {
    CliError::Output(e.to_string())
}

pub(crate) fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}
