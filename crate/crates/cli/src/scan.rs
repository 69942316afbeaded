//! Parameter-grid scans and the representation taxonomy table.

use heun_core::algebraize::algebraize;
use heun_core::canonical::to_generic_with;
use heun_core::exec::{self, Execution};
use heun_core::reps::taxonomy_table;
use heun_core::solvability::{classify, enumerate_qes_levels};
use heun_core::specmat::{quasi_polynomials, SolveOptions};
use heun_core::SolvabilityMode;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::job::JobSpec;
use crate::report::{csv_err, finish};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub index: usize,
    pub coordinates: Vec<f64>,
    pub algebraizable: bool,
    /// Solvability tag, `not_algebraizable`, or `invalid` for points outside the family's domain.
    pub mode: String,
    /// Smallest level with quasi-polynomial solutions, -1 if none.
    pub n: i64,
    pub min_abs_eigenvalue: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub axes: Vec<String>,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = self.axes.clone();
        header.extend(["algebraizable", "mode", "n", "min_abs_eigenvalue"].map(String::from));
        w.write_record(&header).map_err(csv_err)?;
        for r in &self.rows {
            let mut rec: Vec<String> = r.coordinates.iter().map(f64::to_string).collect();
            rec.push(r.algebraizable.to_string());
            rec.push(r.mode.clone());
            rec.push(r.n.to_string());
            rec.push(r.min_abs_eigenvalue.map(|v| v.to_string()).unwrap_or_default());
            w.write_record(&rec).map_err(csv_err)?;
        }
        finish(w)
    }
}

/// Classify every grid point. Points run concurrently; rows come back in grid order.
pub fn scan(job: &JobSpec, execution: Execution) -> Result<ScanTable, CliError> {
    if job.scan.is_empty() {
        return Err(CliError::Invalid("scan needs at least one [[scan]] axis".into()));
    }
    let indices: Vec<usize> = (0..job.grid_len()).collect();
    let rows = exec::map(execution, &indices, |&i| scan_point(job, i));
    Ok(ScanTable { axes: job.scan.iter().map(|a| a.label()).collect(), rows })
}

fn scan_point(job: &JobSpec, index: usize) -> ScanRow {
    let pos = job.grid_position(index);
    let overrides: Vec<_> = job.scan.iter().zip(&pos).map(|(a, &k)| (a, a.value(k))).collect();
    let mut row = ScanRow {
        index,
        coordinates: overrides.iter().map(|(_, x)| *x).collect(),
        algebraizable: false,
        mode: "invalid".into(),
        n: -1,
        min_abs_eigenvalue: None,
    };
    let tol = job.tolerances;
    let Ok(c) = job.equation_with(&overrides).and_then(|eq| Ok(to_generic_with(&eq, &tol)?)) else {
        return row;
    };
    let Ok(alg) = algebraize(&c, &tol) else { return row };
    row.algebraizable = alg.is_algebraizable();
    if !row.algebraizable {
        row.mode = "not_algebraizable".into();
        return row;
    }
    let Ok(rep) = classify(&c, &alg, &tol) else { return row };
    row.mode = rep.mode.tag().into();
    row.n = match &rep.mode {
        SolvabilityMode::QuasiExact(v) => v.iter().map(|i| i.n as i64).min().unwrap_or(-1),
        SolvabilityMode::NotSolvableByQuasiPolynomials => -1,
        _ => 0,
    };
    let opts = SolveOptions::with_tolerances(tol).with_seed(job.seed);
    row.min_abs_eigenvalue = enumerate_qes_levels(&rep, job.nmax, None)
        .iter()
        .filter_map(|inst| quasi_polynomials(&c, inst, &opts).ok())
        .flatten()
        .map(|qp| qp.eigen.norm())
        .reduce(f64::min);
    row
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaxonomyRecord {
    pub casimir: f64,
    pub class: String,
    pub h_bound_low: Option<f64>,
    pub h_bound_high: Option<f64>,
}

pub fn taxonomy(casimirs: &[f64]) -> Vec<TaxonomyRecord> {
    taxonomy_table(casimirs)
        .into_iter()
        .map(|r| TaxonomyRecord { casimir: r.casimir, class: r.class.tag(), h_bound_low: r.h_bound_low, h_bound_high: r.h_bound_high })
        .collect()
}

pub fn taxonomy_csv(rows: &[TaxonomyRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taxonomy_lists_finite_piece_on_the_lattice() {
        // c = -2 is the Casimir of the 3-dimensional representation.
        let rows = taxonomy(&[-2.0]);
        assert!(rows.iter().any(|r| r.class == "FD3" && r.h_bound_low == Some(-1.0) && r.h_bound_high == Some(1.0)));
        let csv = taxonomy_csv(&rows).unwrap();
        assert!(csv.starts_with("casimir,class,h_bound_low,h_bound_high\n"));
    }
}
