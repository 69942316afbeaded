use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heun_core::canonical::{to_generic, GeneralHeunParams, HeunEquation};
use heun_core::exec::{self, Execution};
use heun_core::solvability::{classify, enumerate_qes_levels};
use heun_core::specmat::{quasi_polynomials, solve_batch, SolveOptions};
use heun_core::{algebraize, Tolerances, C64};

/// Half of the grid sits on `alpha = -N` and is quasi-exactly solvable.
fn grid(points: usize) -> Vec<HeunEquation> {
    (0..points)
        .map(|i| {
            let t = i as f64 / points as f64;
            let alpha = if i % 2 == 0 { -(((i / 2) % 13) as f64) } else { -12.0 * t + 0.37 };
            let p = GeneralHeunParams::new(
                C64::new(0.4 + t, 0.1),
                C64::new(1.1, -0.2),
                C64::new(alpha, 0.0),
                C64::new(0.7, 0.3),
                C64::new(0.0, 0.0),
                C64::new(2.5, 0.5),
            );
            HeunEquation::Ghe(p)
        })
        .collect()
}

/// Full pipeline for one grid point: classify, then solve every level up to 12.
fn pipeline(eq: &HeunEquation) -> usize {
    let tol = Tolerances::default();
    let opts = SolveOptions::default();
    let c = to_generic(eq).expect("valid grid point");
    let Ok(rep) = algebraize(&c, &tol).and_then(|alg| classify(&c, &alg, &tol)) else {
        return 0;
    };
    enumerate_qes_levels(&rep, 12, None)
        .iter()
        .filter_map(|inst| quasi_polynomials(&c, inst, &opts).ok())
        .map(|q| q.len())
        .sum()
}

fn scan(c: &mut Criterion) {
    let eqs = grid(256);
    let mut group = c.benchmark_group("scan");
    for mode in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{mode:?}")), &eqs, |b, eqs| {
            b.iter(|| black_box(exec::map(mode, eqs, pipeline)))
        });
    }
    group.finish();
}

fn batch(c: &mut Criterion) {
    let tol = Tolerances::default();
    let eq = HeunEquation::Ghe(GeneralHeunParams::new(
        C64::new(0.6, 0.1),
        C64::new(1.3, 0.0),
        C64::new(-40.0, 0.0),
        C64::new(0.2, 0.4),
        C64::new(0.0, 0.0),
        C64::new(3.0, 0.0),
    ));
    let coeffs = to_generic(&eq).unwrap();
    let rep = classify(&coeffs, &algebraize(&coeffs, &tol).unwrap(), &tol).unwrap();
    let instances: Vec<_> = std::iter::repeat_n(enumerate_qes_levels(&rep, 40, None), 16).flatten().collect();
    let opts = SolveOptions::default();
    let mut group = c.benchmark_group("solve_batch");
    for mode in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{mode:?}")), &instances, |b, inst| {
            b.iter(|| black_box(solve_batch(&coeffs, inst, &opts, mode)))
        });
    }
    group.finish();
}

criterion_group!(benches, scan, batch);
criterion_main!(benches);
