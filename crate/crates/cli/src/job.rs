//! Job files: one TOML document per run.
//!
//! ```toml
//! family = "bhe"
//! nmax = 6
//!
//! [parameters]
//! alpha = [0.5, 0.0]
//! beta = [1.0, 0.0]
//! gamma = [6.5, 0.0]
//! delta = [0.3, 0.0]
//!
//! [tolerances]
//! residual = 1e-9
//!
//! [[scan]]
//! parameter = "alpha"
//! part = "re"
//! start = -5.0
//! stop = 0.0
//! steps = 51
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use heun_core::canonical::{Family, HeunEquation};
use heun_core::{Tolerances, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_NMAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanAxis {
    pub parameter: String,
    #[serde(default = "default_part")]
    pub part: Part,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

fn default_part() -> Part {
    Part::Re
}

impl ScanAxis {
    /// Value at grid position `k`, endpoints included.
    pub fn value(&self, k: usize) -> f64 {
        if self.steps <= 1 {
            return self.start;
        }
        self.start + (self.stop - self.start) * k as f64 / (self.steps - 1) as f64
    }

    pub fn label(&self) -> String {
        let part = match self.part {
            Part::Re => "re",
            Part::Im => "im",
        };
        format!("{}.{part}", self.parameter)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    family: String,
    parameters: BTreeMap<String, C64>,
    nmax: Option<usize>,
    seed: Option<u64>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    scan: Vec<ScanAxis>,
}

/// A validated job. Parameters are stored in the family's canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    pub family: Family,
    pub parameters: Vec<(String, C64)>,
    pub nmax: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scan: Vec<ScanAxis>,
}

impl JobSpec {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawJob = toml::from_str(text)?;
        let family = Family::parse(&raw.family).ok_or_else(|| CliError::Invalid(format!("unknown family `{}`", raw.family)))?;
        let names = family.parameter_names();
        let extra = |k: &str| family == Family::Ghe && k == "epsilon";
        if let Some(k) = raw.parameters.keys().find(|k| !names.contains(&k.as_str()) && !extra(k)) {
            return Err(CliError::Invalid(format!("`{k}` is not a {family} parameter (expected {})", names.join(", "))));
        }
        let mut parameters = Vec::new();
        for name in names.iter().copied().chain((family == Family::Ghe).then_some("epsilon")) {
            match raw.parameters.get(name) {
                Some(v) if !(v.re.is_finite() && v.im.is_finite()) => {
                    return Err(CliError::Invalid(format!("parameter `{name}` is not finite")))
                }
                Some(v) => parameters.push((name.to_string(), *v)),
                None if extra(name) => {}
                None => return Err(CliError::Invalid(format!("missing {family} parameter `{name}`"))),
            }
        }
        for axis in &raw.scan {
            if !parameters.iter().any(|(n, _)| *n == axis.parameter) {
                return Err(CliError::Invalid(format!("scan axis `{}` is not a declared parameter", axis.parameter)));
            }
            if axis.steps == 0 || !axis.start.is_finite() || !axis.stop.is_finite() {
                return Err(CliError::Invalid(format!("scan axis `{}` needs finite bounds and steps >= 1", axis.label())));
            }
        }
        Ok(JobSpec {
            family,
            parameters,
            nmax: raw.nmax.unwrap_or(DEFAULT_NMAX),
            seed: raw.seed.unwrap_or(0),
            tolerances: raw.tolerances,
            scan: raw.scan,
        })
    }

    pub fn parameter(&self, name: &str) -> Option<C64> {
        self.parameters.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn equation(&self) -> Result<HeunEquation, CliError> {
        self.equation_with(&[])
    }

    /// The equation with some parameter components overridden (scan points).
    pub fn equation_with(&self, overrides: &[(&ScanAxis, f64)]) -> Result<HeunEquation, CliError> {
        let lookup = |name: &str| {
            let mut v = self.parameter(name)?;
            for (axis, x) in overrides.iter().filter(|(a, _)| a.parameter == name) {
                match axis.part {
                    Part::Re => v.re = *x,
                    Part::Im => v.im = *x,
                }
            }
            Some(v)
        };
        Ok(HeunEquation::from_named(self.family, lookup)?)
    }

    /// Total number of scan points.
    pub fn grid_len(&self) -> usize {
        self.scan.iter().map(|a| a.steps).product()
    }

    /// Per-axis positions of flat grid index `i`; the last axis varies fastest.
    pub fn grid_position(&self, mut i: usize) -> Vec<usize> {
        let mut pos = vec![0; self.scan.len()];
        for (k, axis) in self.scan.iter().enumerate().rev() {
            pos[k] = i % axis.steps;
            i /= axis.steps;
        }
        pos
    }
}
