//! Random equation and instance generators shared by the integration tests.
#![allow(dead_code)]

use heun_core::canonical::*;
use heun_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Complex number with real part in `[-re, re]` and imaginary part in `[-im, im]`.
pub fn cx(rng: &mut ChaCha8Rng, re: f64, im: f64) -> C64 {
    C64::new(rng.random_range(-re..=re), rng.random_range(-im..=im))
}

/// Complex number with modulus in `[lo, hi]` and random phase.
pub fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> C64 {
    C64::from_polar(rng.random_range(lo..=hi), rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn random_ghe(rng: &mut ChaCha8Rng) -> GeneralHeunParams {
    let a = loop {
        let a = polar(rng, 1.5, 3.0);
        if (a - 1.0).norm() > 0.3 {
            break a;
        }
    };
    GeneralHeunParams::new(cx(rng, 2.0, 1.0), cx(rng, 2.0, 1.0), cx(rng, 2.0, 1.0), cx(rng, 2.0, 1.0), cx(rng, 2.0, 1.0), a)
}

pub fn random_che(rng: &mut ChaCha8Rng) -> ConfluentHeunParams {
    ConfluentHeunParams {
        kappa: polar(rng, 0.5, 2.0),
        gamma: cx(rng, 2.0, 1.0),
        delta: cx(rng, 2.0, 1.0),
        mu: cx(rng, 2.0, 1.0),
        nu: cx(rng, 2.0, 1.0),
    }
}

pub fn random_bhe(rng: &mut ChaCha8Rng) -> BiconfluentHeunParams {
    BiconfluentHeunParams { alpha: cx(rng, 2.0, 1.0), beta: cx(rng, 2.0, 1.0), gamma: cx(rng, 3.0, 1.0), delta: cx(rng, 2.0, 1.0) }
}

/// `|alpha-1|` is kept large: the series at the irregular point `z = 0`
/// amplifies rounding roughly like `m / |alpha-1|` per term.
pub fn random_dhe(rng: &mut ChaCha8Rng) -> DoublyConfluentHeunParams {
    DoublyConfluentHeunParams {
        alpha1: polar(rng, 0.5, 2.0),
        alpham1: polar(rng, 8.0, 12.0),
        b1: cx(rng, 2.0, 1.0),
        b0: cx(rng, 2.0, 1.0),
        bm1: cx(rng, 2.0, 1.0),
    }
}

pub fn random_the(rng: &mut ChaCha8Rng) -> TriconfluentHeunParams {
    TriconfluentHeunParams { alpha: cx(rng, 2.0, 1.0), beta: cx(rng, 2.0, 1.0), gamma: cx(rng, 2.0, 1.0) }
}

pub fn random_equation(rng: &mut ChaCha8Rng, family: Family) -> HeunEquation {
    match family {
        Family::Ghe => HeunEquation::Ghe(random_ghe(rng)),
        Family::Che => HeunEquation::Che(random_che(rng)),
        Family::Bhe => HeunEquation::Bhe(random_bhe(rng)),
        Family::Dhe => HeunEquation::Dhe(random_dhe(rng)),
        Family::The => HeunEquation::The(random_the(rng)),
    }
}

/// Number of distinct QES routes per family.
pub fn branch_count(family: Family) -> usize {
    match family {
        Family::Ghe => 4,
        Family::Che | Family::Bhe => 2,
        Family::Dhe | Family::The => 1,
    }
}

/// A random equation placed on the given QES route at level `n`, together
/// with the exponent `2 tau` that route predicts. THE only has `n = 0`.
pub fn random_qes(rng: &mut ChaCha8Rng, family: Family, branch: usize, n: usize) -> (HeunEquation, C64) {
    let nf = n as f64;
    match family {
        Family::Ghe => {
            let mut p = random_ghe(rng);
            let t2 = 1.0 - p.gamma;
            let tau2 = match branch % 4 {
                0 => {
                    p.alpha = r(-nf);
                    r(0.0)
                }
                1 => {
                    p.beta = r(-nf);
                    r(0.0)
                }
                2 => {
                    p.alpha = p.gamma - 1.0 - nf;
                    t2
                }
                _ => {
                    p.beta = p.gamma - 1.0 - nf;
                    t2
                }
            };
            let p = GeneralHeunParams::new(p.gamma, p.delta, p.alpha, p.beta, p.q, p.a);
            (HeunEquation::Ghe(p), tau2)
        }
        Family::Che => {
            let mut p = random_che(rng);
            let tau2 = if branch.is_multiple_of(2) {
                p.nu = -p.kappa * nf - p.mu;
                r(0.0)
            } else {
                p.nu = -p.kappa * (nf + 1.0 - p.gamma) - p.mu;
                1.0 - p.gamma
            };
            (HeunEquation::Che(p), tau2)
        }
        Family::Bhe => {
            let mut p = random_bhe(rng);
            let tau2 = if branch.is_multiple_of(2) {
                p.gamma = p.alpha + 2.0 + 2.0 * nf;
                r(0.0)
            } else {
                p.gamma = 2.0 * nf + 2.0 - p.alpha;
                -p.alpha
            };
            (HeunEquation::Bhe(p), tau2)
        }
        Family::Dhe => {
            let mut p = random_dhe(rng);
            p.b1 = p.alpha1 * (p.bm1 / p.alpham1 - 1.0 - nf);
            let tau2 = 0.5 - p.bm1 / p.alpham1;
            (HeunEquation::Dhe(p), tau2)
        }
        Family::The => (HeunEquation::The(random_the(rng)), r(0.0)),
    }
}
