//! Published explicit matrices, kept for cross-validation of the generic builder.
//!
//! Each published matrix shows its first rows, a band pattern and its last
//! rows. Two readings are offered:
//!
//! * [`Reading::Literal`] uses the printed rows verbatim, with the printed
//!   last rows winning whenever they overlap the first rows (small `N`).
//! * [`Reading::GeneralTerm`] extends the band pattern of the first rows over
//!   the whole matrix.
//!
//! Entries where the literal reading disagrees with the generic builder are
//! listed in [`DISCREPANCIES`]; the generic builder is authoritative.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{build_invariant_matrix, InvariantMatrix};
use crate::canonical::{to_generic_with, Family, HeunEquation};
use crate::error::{HeunError, Result};
use crate::tol::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaperMode {
    Polynomial,
    Quasi,
    DheI,
    DheII,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaperMatrix {
    GhePoly,
    ChePoly,
    BhePoly,
    GheQuasi,
    CheQuasi,
    BheQuasi,
    DheI,
    DheII,
}

impl PaperMatrix {
    pub const ALL: [PaperMatrix; 8] = [
        PaperMatrix::GhePoly,
        PaperMatrix::ChePoly,
        PaperMatrix::BhePoly,
        PaperMatrix::GheQuasi,
        PaperMatrix::CheQuasi,
        PaperMatrix::BheQuasi,
        PaperMatrix::DheI,
        PaperMatrix::DheII,
    ];

    pub fn from_mode(family: Family, mode: PaperMode) -> Result<Self> {
        use PaperMatrix::*;
        Ok(match (family, mode) {
            (Family::Ghe, PaperMode::Polynomial) => GhePoly,
            (Family::Che, PaperMode::Polynomial) => ChePoly,
            (Family::Bhe, PaperMode::Polynomial) => BhePoly,
            (Family::Ghe, PaperMode::Quasi) => GheQuasi,
            (Family::Che, PaperMode::Quasi) => CheQuasi,
            (Family::Bhe, PaperMode::Quasi) => BheQuasi,
            (Family::Dhe, PaperMode::DheI) => DheI,
            (Family::Dhe, PaperMode::DheII) => DheII,
            _ => return Err(HeunError::Unsupported(format!("no published matrix for {family} in mode {mode:?}"))),
        })
    }

    pub fn family(self) -> Family {
        match self {
            PaperMatrix::GhePoly | PaperMatrix::GheQuasi => Family::Ghe,
            PaperMatrix::ChePoly | PaperMatrix::CheQuasi => Family::Che,
            PaperMatrix::BhePoly | PaperMatrix::BheQuasi => Family::Bhe,
            PaperMatrix::DheI | PaperMatrix::DheII => Family::Dhe,
        }
    }
}

impl fmt::Display for PaperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PaperMatrix::GhePoly => "ghe-polynomial",
            PaperMatrix::ChePoly => "che-polynomial",
            PaperMatrix::BhePoly => "bhe-polynomial",
            PaperMatrix::GheQuasi => "ghe-quasi",
            PaperMatrix::CheQuasi => "che-quasi",
            PaperMatrix::BheQuasi => "bhe-quasi",
            PaperMatrix::DheI => "dhe-i",
            PaperMatrix::DheII => "dhe-ii",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    Literal,
    GeneralTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    Sub,
    Main,
    Super,
}

/// Storage index within a band: `sub[k] = M[k+1][k]`, `main[k]`, `sup[k] = M[k][k+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Every,
    FromTop(usize),
    /// 0 is the last entry of the band.
    FromBottom(usize),
}

impl Position {
    fn matches(self, index: usize, len: usize) -> bool {
        match self {
            Position::Every => true,
            Position::FromTop(i) => index == i,
            Position::FromBottom(j) => len > j && index == len - 1 - j,
        }
    }
}

/// A known disagreement between a printed entry and the generic builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub matrix: PaperMatrix,
    pub band: Band,
    pub position: Position,
    pub printed: &'static str,
    pub expected: &'static str,
}

pub static DISCREPANCIES: &[Discrepancy] = &[
    Discrepancy {
        matrix: PaperMatrix::GhePoly,
        band: Band::Super,
        position: Position::FromTop(2),
        printed: "3(-2(a(delta+gamma)+epsilon+gamma)+a gamma)",
        expected: "3a(2+gamma)",
    },
    Discrepancy {
        matrix: PaperMatrix::GhePoly,
        band: Band::Sub,
        position: Position::FromBottom(0),
        printed: "alpha beta+(N-1)[(N-2)-(gamma+epsilon+delta)]",
        expected: "alpha beta+(N-1)[(N-2)+(gamma+epsilon+delta)]",
    },
    Discrepancy {
        matrix: PaperMatrix::GhePoly,
        band: Band::Main,
        position: Position::FromBottom(0),
        printed: "-N(N-1)(1+a)-N(a(delta+gamma)+epsilon+delta)",
        expected: "-N(N-1)(1+a)-N(a(delta+gamma)+epsilon+gamma)",
    },
    Discrepancy {
        matrix: PaperMatrix::ChePoly,
        band: Band::Super,
        position: Position::Every,
        printed: "k(1-kappa)",
        expected: "-k(k-1+gamma)",
    },
    Discrepancy {
        matrix: PaperMatrix::BhePoly,
        band: Band::Main,
        position: Position::FromBottom(0),
        printed: "N(N-1)-N beta",
        expected: "-N beta",
    },
    Discrepancy {
        matrix: PaperMatrix::BhePoly,
        band: Band::Main,
        position: Position::FromBottom(1),
        printed: "(N-1)(N-2)-(N-1)beta",
        expected: "-(N-1)beta",
    },
    Discrepancy {
        matrix: PaperMatrix::GheQuasi,
        band: Band::Super,
        position: Position::FromBottom(0),
        printed: "(N+1)(N+2)a-(N+1)a gamma",
        expected: "N(N+1)a-N a gamma",
    },
    Discrepancy {
        matrix: PaperMatrix::CheQuasi,
        band: Band::Super,
        position: Position::FromBottom(0),
        printed: "(N+1)gamma-(N+1)(N+2)",
        expected: "N gamma-N(N+1)",
    },
    Discrepancy {
        matrix: PaperMatrix::BheQuasi,
        band: Band::Super,
        position: Position::FromBottom(0),
        printed: "(N+1)^2-(N+1)alpha",
        expected: "N^2-N alpha",
    },
    Discrepancy {
        matrix: PaperMatrix::DheI,
        band: Band::Super,
        position: Position::FromBottom(0),
        printed: "(N+1)alpha_-1",
        expected: "N alpha_-1",
    },
    Discrepancy {
        matrix: PaperMatrix::DheII,
        band: Band::Super,
        position: Position::FromBottom(0),
        printed: "-(N+1)alpha_1",
        expected: "-N alpha_1",
    },
];

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

struct Bands {
    main: Vec<C64>,
    sub: Vec<C64>,
    sup: Vec<C64>,
}

impl Bands {
    fn general(n: usize, main: impl Fn(f64) -> C64, sub: impl Fn(f64) -> C64, sup: impl Fn(f64) -> C64) -> Self {
        Self {
            main: (0..=n).map(|k| main(k as f64)).collect(),
            sub: (0..n).map(|k| sub(k as f64)).collect(),
            sup: (0..n).map(|k| sup(k as f64)).collect(),
        }
    }

    fn set_sub(&mut self, k: usize, v: C64) {
        if k < self.sub.len() {
            self.sub[k] = v;
        }
    }

    fn set_sup(&mut self, k: usize, v: C64) {
        if k < self.sup.len() {
            self.sup[k] = v;
        }
    }
}

fn admissible(value: C64, n: usize, what: &str) -> Result<()> {
    if (value - n as f64).norm() <= 1e-9 * (1.0 + n as f64) {
        Ok(())
    } else {
        Err(HeunError::NotAnInstance { value: format!("{what} = {value}"), n })
    }
}

fn wrong_family(kind: PaperMatrix, eq: &HeunEquation) -> HeunError {
    HeunError::Unsupported(format!("{kind} needs {} parameters, got {}", kind.family(), eq.family()))
}

/// Printed matrix for `eq` at level `n`, read as requested.
pub fn paper_matrix_with(eq: &HeunEquation, kind: PaperMatrix, n: usize, reading: Reading) -> Result<InvariantMatrix> {
    let literal = reading == Reading::Literal;
    let nf = n as f64;
    let (bands, base, descending) = match (kind, eq) {
        (PaperMatrix::GhePoly, HeunEquation::Ghe(p)) => {
            if (p.alpha + nf).norm() > 1e-9 * (1.0 + nf) {
                admissible(-p.beta, n, "-beta")?;
            }
            let (a, g, d, e, ab) = (p.a, p.gamma, p.delta, p.epsilon, p.alpha * p.beta);
            let s = a * (d + g) + e + g;
            let mut b = Bands::general(
                n,
                |k| -k * (k - 1.0) * (1.0 + a) - k * s,
                |k| ab + k * ((k - 1.0) + (g + e + d)),
                |k| (k + 1.0) * a * (k + g),
            );
            if literal {
                if n >= 3 {
                    b.set_sup(2, 3.0 * (-2.0 * s + a * g));
                }
                if n >= 1 {
                    b.set_sub(n - 1, ab + (nf - 1.0) * ((nf - 2.0) - (g + e + d)));
                }
                b.main[n] = -nf * (nf - 1.0) * (1.0 + a) - nf * (a * (d + g) + e + d);
            }
            (b, r(0.0), false)
        }
        (PaperMatrix::ChePoly, HeunEquation::Che(p)) => {
            admissible(-(p.mu + p.nu) / p.kappa, n, "-(mu+nu)/kappa")?;
            let (kap, g, d) = (p.kappa, p.gamma, p.delta);
            let b = Bands::general(
                n,
                |k| k * (k - 1.0 + g + d - kap),
                |k| -(nf - k) * kap,
                |k| (k + 1.0) * (1.0 - kap),
            );
            // The printed last row agrees with the band pattern.
            (b, r(0.0), false)
        }
        (PaperMatrix::BhePoly, HeunEquation::Bhe(p)) => {
            let m = p.gamma - p.alpha - 2.0;
            admissible(m / 2.0, n, "(gamma-alpha-2)/2")?;
            let (al, be) = (p.alpha, p.beta);
            let mut b = Bands::general(n, |k| -k * be, |k| m - 2.0 * k, |k| (k + 1.0) * (al + k + 1.0));
            if literal {
                if n >= 1 {
                    if n >= 2 {
                        b.set_sub(n - 2, m - 2.0 * (nf - 2.0));
                    }
                    b.main[n - 1] = (nf - 1.0) * (nf - 2.0) - (nf - 1.0) * be;
                    b.set_sup(n - 1, nf * (al + nf));
                    b.set_sub(n - 1, m - 2.0 * (nf - 1.0));
                }
                b.main[n] = nf * (nf - 1.0) - nf * be;
            }
            (b, r(0.0), false)
        }
        (PaperMatrix::GheQuasi, HeunEquation::Ghe(p)) => {
            // Printed for alpha = gamma - 1 - N; the other route swaps alpha and beta.
            let bb = if (p.gamma - 1.0 - p.alpha - nf).norm() <= 1e-9 * (1.0 + nf) {
                p.beta
            } else {
                admissible(p.gamma - 1.0 - p.beta, n, "gamma-1-beta")?;
                p.alpha
            };
            let (a, g, d) = (p.a, p.gamma, p.delta);
            let konst = -g * d + bb * g + a * g * d;
            let mut b = Bands::general(
                n,
                |k| {
                    (nf - k) * (1.0 + k) - (nf - k) * g + konst - (k + 1.0) * bb - (k + 1.0) * d * (a - 1.0) + k * a * g
                        - k * (k + 1.0) * a
                },
                |k| (nf - k) * (g - bb) - (nf - k) * (k + 1.0),
                |k| (k + 1.0) * (k + 2.0) * a - (k + 1.0) * a * g,
            );
            if literal {
                if n >= 1 {
                    if n >= 2 {
                        b.set_sub(n - 2, 2.0 * (g - bb) - 2.0 * (nf - 1.0));
                    }
                    b.main[n - 1] = 1.0 * nf - g + konst - nf * bb - nf * d * (a - 1.0) + (nf - 1.0) * a * g
                        - nf * (nf - 1.0) * a;
                    b.set_sup(n - 1, (nf + 1.0) * (nf + 2.0) * a - (nf + 1.0) * a * g);
                    b.set_sub(n - 1, (g - bb) - 1.0 * nf);
                }
                b.main[n] = konst - (nf + 1.0) * bb - (nf + 1.0) * d * (a - 1.0) + nf * a * g - nf * (nf + 1.0) * a;
            }
            (b, 1.0 - p.gamma, false)
        }
        (PaperMatrix::CheQuasi, HeunEquation::Che(p)) => {
            let (kap, g, d) = (p.kappa, p.gamma, p.delta);
            admissible(-(p.mu + p.nu) / kap - (1.0 - g), n, "-(mu+nu)/kappa-(1-gamma)")?;
            let mut b = Bands::general(
                n,
                |k| (k + 1.0 - g) * (d - kap) - k * g + k * (k + 1.0),
                |k| -(nf - k) * kap,
                |k| (k + 1.0) * g - (k + 1.0) * (k + 2.0),
            );
            if literal {
                if n >= 1 {
                    if n >= 2 {
                        b.set_sub(n - 2, -2.0 * kap);
                    }
                    b.main[n - 1] = (nf - g) * (d - kap) - (nf - 1.0) * g + nf * (nf - 1.0);
                    b.set_sup(n - 1, (nf + 1.0) * g - (nf + 1.0) * (nf + 2.0));
                    b.set_sub(n - 1, -kap);
                }
                b.main[n] = (nf + 1.0 - g) * (d - kap) - nf * g + nf * (nf + 1.0);
            }
            (b, 1.0 - p.gamma, false)
        }
        (PaperMatrix::BheQuasi, HeunEquation::Bhe(p)) => {
            let (al, be) = (p.alpha, p.beta);
            admissible((p.gamma + al - 2.0) / 2.0, n, "(gamma+alpha-2)/2")?;
            let mut b = Bands::general(
                n,
                |k| al * be - k * be,
                |k| r(2.0 * (nf - k)),
                |k| (k + 1.0) * (k + 1.0) - (k + 1.0) * al,
            );
            if literal {
                if n >= 1 {
                    if n >= 2 {
                        b.set_sub(n - 2, r(2.0 * 2.0));
                    }
                    b.main[n - 1] = al * be - (nf - 1.0) * be;
                    b.set_sup(n - 1, (nf + 1.0) * (nf + 1.0) - (nf + 1.0) * al);
                    b.set_sub(n - 1, r(2.0 * 1.0));
                }
                b.main[n] = al * be - nf * be;
            }
            (b, -p.alpha, false)
        }
        (PaperMatrix::DheI | PaperMatrix::DheII, HeunEquation::Dhe(p)) => {
            let level = -(p.b1 / p.alpha1 + 0.5) + (p.bm1 / p.alpham1 - 0.5);
            admissible(level, n, "-(B1/alpha1+1/2)+(B-1/alpha-1-1/2)")?;
            let odd = |k: f64| 2.0 * k + 1.0;
            if kind == PaperMatrix::DheI {
                let (am, a1, q) = (p.alpham1, p.alpha1, p.bm1 / p.alpham1);
                let mut b = Bands::general(
                    n,
                    |k| odd(k) * odd(k) / 4.0 + q * q - odd(k) * q,
                    |k| -(nf - k) * a1,
                    |k| (k + 1.0) * am,
                );
                if literal {
                    if n >= 1 {
                        if n >= 2 {
                            b.set_sub(n - 2, -2.0 * a1);
                        }
                        b.main[n - 1] = (2.0 * nf - 1.0).powi(2) / 4.0 + q * q - (2.0 * nf - 1.0) * q;
                        b.set_sup(n - 1, (nf + 1.0) * am);
                        b.set_sub(n - 1, -a1);
                    }
                    b.main[n] = (2.0 * nf + 1.0).powi(2) / 4.0 + q * q - (2.0 * nf + 1.0) * q;
                }
                (b, -(q - 0.5), false)
            } else {
                let (am, a1, q) = (p.alpham1, p.alpha1, p.b1 / p.alpha1);
                let mut b = Bands::general(
                    n,
                    |k| odd(k) * odd(k) / 4.0 + q * q + odd(k) * q,
                    |k| (nf - k) * am,
                    |k| -(k + 1.0) * a1,
                );
                if literal {
                    if n >= 1 {
                        if n >= 2 {
                            b.set_sub(n - 2, 2.0 * am);
                        }
                        b.main[n - 1] = q * q + (2.0 * nf - 1.0).powi(2) / 4.0 + (2.0 * nf - 1.0) * q;
                        b.set_sup(n - 1, -(nf + 1.0) * a1);
                        b.set_sub(n - 1, am);
                    }
                    b.main[n] = (2.0 * nf + 1.0).powi(2) / 4.0 + q * q + (2.0 * nf + 1.0) * q;
                }
                (b, -(q + 0.5), true)
            }
        }
        _ => return Err(wrong_family(kind, eq)),
    };
    let shift = to_generic_with(eq, &Tolerances::default())?[8];
    Ok(InvariantMatrix { n, base, descending, main: bands.main, sub: bands.sub, sup: bands.sup, sup2: None, shift })
}

/// Literal printed matrix selected by family and mode.
pub fn paper_matrix(eq: &HeunEquation, mode: PaperMode, n: usize) -> Result<InvariantMatrix> {
    paper_matrix_with(eq, PaperMatrix::from_mode(eq.family(), mode)?, n, Reading::Literal)
}

/// The generic builder's matrix in the basis the printed matrix uses.
pub fn generic_counterpart(eq: &HeunEquation, kind: PaperMatrix, n: usize, tol: &Tolerances) -> Result<InvariantMatrix> {
    let c = to_generic_with(eq, tol)?;
    let tau = match (kind, eq) {
        (PaperMatrix::GhePoly | PaperMatrix::ChePoly | PaperMatrix::BhePoly, _) => r(0.0),
        (PaperMatrix::GheQuasi, HeunEquation::Ghe(p)) => (1.0 - p.gamma) / 2.0,
        (PaperMatrix::CheQuasi, HeunEquation::Che(p)) => (1.0 - p.gamma) / 2.0,
        (PaperMatrix::BheQuasi, HeunEquation::Bhe(p)) => -p.alpha / 2.0,
        (PaperMatrix::DheI | PaperMatrix::DheII, HeunEquation::Dhe(p)) => -(p.bm1 / (2.0 * p.alpham1) - 0.25),
        _ => return Err(wrong_family(kind, eq)),
    };
    if kind.family() != eq.family() {
        return Err(wrong_family(kind, eq));
    }
    let m = build_invariant_matrix(&c, tau + n as f64 / 2.0, tau, n, tol)?;
    Ok(if kind == PaperMatrix::DheII { m.reversed() } else { m })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryMismatch {
    pub band: Band,
    pub index: usize,
    pub printed: C64,
    pub generic: C64,
    /// Registry entry accounting for the mismatch.
    pub explained_by: Option<Discrepancy>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub matrix: PaperMatrix,
    pub reading: Reading,
    pub n: usize,
    pub mismatches: Vec<EntryMismatch>,
}

impl CrossCheck {
    pub fn unexplained(&self) -> impl Iterator<Item = &EntryMismatch> {
        self.mismatches.iter().filter(|m| m.explained_by.is_none())
    }
}

fn registry_lookup(matrix: PaperMatrix, band: Band, index: usize, len: usize) -> Option<Discrepancy> {
    DISCREPANCIES
        .iter()
        .find(|d| d.matrix == matrix && d.band == band && d.position.matches(index, len))
        .copied()
}

/// Compare a printed matrix entrywise with the generic builder, to relative
/// tolerance `rel` per entry.
pub fn cross_check(eq: &HeunEquation, kind: PaperMatrix, n: usize, reading: Reading, rel: f64) -> Result<CrossCheck> {
    let tol = Tolerances::default();
    let printed = paper_matrix_with(eq, kind, n, reading)?;
    let generic = generic_counterpart(eq, kind, n, &tol)?;
    let mut mismatches = Vec::new();
    let bands = [
        (Band::Sub, &printed.sub, &generic.sub),
        (Band::Main, &printed.main, &generic.main),
        (Band::Super, &printed.sup, &generic.sup),
    ];
    for (band, p, g) in bands {
        for (index, (x, y)) in p.iter().zip(g.iter()).enumerate() {
            if (x - y).norm() > rel * x.norm().max(y.norm()).max(1.0) {
                mismatches.push(EntryMismatch {
                    band,
                    index,
                    printed: *x,
                    generic: *y,
                    explained_by: registry_lookup(kind, band, index, p.len()),
                });
            }
        }
    }
    Ok(CrossCheck { matrix: kind, reading, n, mismatches })
}
