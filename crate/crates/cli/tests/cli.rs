use std::path::PathBuf;
use std::process::{Command, Output};

use heun_cli::scan::{scan, ScanTable};
use heun_cli::{run::run, JobSpec, RunMode, SolutionReport};
use heun_core::exec::Execution;
use heun_core::C64;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn heun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heun")).args(args).output().expect("binary runs")
}

fn job(name: &str) -> JobSpec {
    JobSpec::from_path(&fixture(name)).unwrap()
}

#[test]
fn confluent_without_raising_part_is_reported_not_rejected() {
    let path = fixture("che_not_algebraizable.toml");
    let out = heun(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = SolutionReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(!report.algebraizable);
    assert_eq!(report.reason.as_deref(), Some("a₀=a₄=0, a₇≠0"));
    assert!(report.solvability.is_none() && report.solutions.is_empty());
}

/// Evaluate `z y'' + (1 + alpha - beta z - 2 z^2) y' + ((gamma - alpha - 2) z - (delta + (1 + alpha) beta) / 2) y`
/// for a polynomial `y`, relative to the size of its terms.
fn bhe_relative_residual(p: [C64; 4], coeffs: &[C64], z: C64) -> f64 {
    let [alpha, beta, gamma, delta] = p;
    let (mut y, mut dy, mut d2y) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    for c in coeffs.iter().rev() {
        d2y = d2y * z + 2.0 * dy;
        dy = dy * z + y;
        y = y * z + c;
    }
    let terms = [
        z * d2y,
        (1.0 + alpha - beta * z - 2.0 * z * z) * dy,
        ((gamma - alpha - 2.0) * z - 0.5 * (delta + (1.0 + alpha) * beta)) * y,
    ];
    let sum: C64 = terms.iter().sum();
    sum.norm() / terms.iter().map(|t| t.norm()).fold(f64::MIN_POSITIVE, f64::max)
}

#[test]
fn biconfluent_level_two_has_three_verified_solutions() {
    let path = fixture("bhe_level2.toml");
    let out = heun(&["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = SolutionReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report.solutions.len(), 3);
    let j = job("bhe_level2.toml");
    let get = |n: &str| j.parameter(n).unwrap();
    for s in &report.solutions {
        assert!(s.verified && s.n == 2 && s.exponent.norm() == 0.0);
        assert_eq!(s.native.name, "delta");
        // Plug the recovered delta into the equation itself.
        let p = [get("alpha"), get("beta"), get("gamma"), s.native.value];
        for z in [C64::new(0.3, 0.1), C64::new(-1.2, 0.7), C64::new(2.0, -0.5)] {
            assert!(bhe_relative_residual(p, &s.coefficients, z) < 1e-12, "{s:?}");
        }
    }
    let distinct = report.solutions.windows(2).all(|w| (w[0].eigenvalue - w[1].eigenvalue).norm() > 1e-3);
    assert!(distinct);
}

#[test]
fn general_heun_alpha_scan_flags_the_integer_lattice() {
    let path = fixture("ghe_alpha_scan.toml");
    let out = heun(&["scan", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["alpha.re", "algebraizable", "mode", "n", "min_abs_eigenvalue"]);
    let rows: Vec<_> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 51);
    let flagged: Vec<(f64, i64)> = rows
        .iter()
        .filter(|r| &r[2] == "quasi_exact")
        .map(|r| (r[0].parse().unwrap(), r[3].parse().unwrap()))
        .collect();
    assert_eq!(flagged, vec![(-5.0, 5), (-4.0, 4), (-3.0, 3), (-2.0, 2), (-1.0, 1), (0.0, 0)]);
    assert!(rows.iter().all(|r| &r[1] == "true"));
    assert!(rows.iter().filter(|r| &r[2] != "quasi_exact").all(|r| &r[3] == "-1" && r[4].is_empty()));
}

#[test]
fn scan_order_does_not_depend_on_execution() {
    let j = job("ghe_alpha_scan.toml");
    let seq = scan(&j, Execution::Sequential).unwrap();
    let par = scan(&j, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
    assert!(par.rows.iter().enumerate().all(|(i, r)| r.index == i));
    let json = serde_json::to_string(&par).unwrap();
    assert_eq!(serde_json::from_str::<ScanTable>(&json).unwrap(), par);
}

#[test]
fn report_round_trips_through_json() {
    for (name, mode) in [
        ("che_complex.toml", RunMode::Solve),
        ("bhe_level2.toml", RunMode::Solve),
        ("che_not_algebraizable.toml", RunMode::Analyze),
        ("bhe_strict.toml", RunMode::Solve),
    ] {
        let report = run(&job(name), mode).unwrap();
        let back = SolutionReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report, "{name}");
    }
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("che_complex.toml");
    let mut texts = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("r{k}.json"));
        let o = heun(&["solve", "--input", path.to_str().unwrap(), "--output", out.to_str().unwrap(), "--seed", "7"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
        texts.push(std::fs::read_to_string(out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let report = SolutionReport::from_json(&texts[0]).unwrap();
    assert_eq!(report.solutions.len(), 3);
    assert!(report.solutions.iter().all(|s| s.verified));
}

#[test]
fn exit_codes_follow_the_mapping() {
    let cases: &[(&[&str], &str, i32)] = &[
        (&["analyze"], "che_not_algebraizable.toml", 0),
        (&["solve"], "bhe_level2.toml", 0),
        (&["solve", "--format", "csv"], "che_complex.toml", 0),
        (&["scan"], "ghe_alpha_scan.toml", 0),
        (&["solve"], "bhe_strict.toml", 3),
        (&["solve", "--tol", "1e-40"], "bhe_level2.toml", 3),
        (&["solve"], "malformed.toml", 2),
        (&["analyze"], "unknown_family.toml", 2),
        (&["solve"], "missing_parameter.toml", 2),
        (&["analyze"], "ghe_singular_a.toml", 2),
        (&["scan"], "scan_unknown_axis.toml", 2),
        (&["scan"], "bhe_level2.toml", 2),
        (&["solve"], "does_not_exist.toml", 2),
        (&["solve", "--tol", "-1"], "bhe_level2.toml", 2),
    ];
    for (args, file, code) in cases {
        let path = fixture(file);
        let mut all: Vec<&str> = args.to_vec();
        all.extend(["--input", path.to_str().unwrap()]);
        let out = heun(&all);
        assert_eq!(out.status.code(), Some(*code), "{args:?} {file}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(heun(&["solve"]).status.code(), Some(2));
    assert_eq!(heun(&["taxonomy", "--casimir", "-2,0.1,0.3"]).status.code(), Some(0));
}

#[test]
fn known_misprints_surface_as_warnings() {
    let report = run(&job("bhe_level2.toml"), RunMode::Analyze).unwrap();
    assert!(report.warnings.iter().any(|w| w.contains("bhe-polynomial") && w.contains("generic builder used")));
    assert!(report.solutions.is_empty());
    assert!(report.representations.iter().any(|r| r.tags.contains(&"FD3".to_string())));
}
