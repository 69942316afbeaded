//! Which su(1,1) representations host the solutions, plus the general
//! classification table by Casimir value.
//!
//! Dimensions follow `d = 2j + 1`, so the finite-dimensional representation at
//! Casimir `c = (1 - d^2)/4` has `d` states with weights `(1-d)/2 ..= (d-1)/2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::solvability::level;
use crate::tol::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepClass {
    PrincipalSeries,
    ComplementarySeries,
    PositiveDiscrete,
    NegativeDiscrete,
    NonUnitaryUnbounded,
    NonUnitaryBoundedBelow,
    NonUnitaryBoundedAbove,
    FiniteDimensional { dim: usize },
    /// Complex `j`: the representation is bounded but no unitarity statement applies.
    BoundedUnclassified,
}

impl RepClass {
    pub fn tag(&self) -> String {
        match self {
            RepClass::PrincipalSeries => "PS".into(),
            RepClass::ComplementarySeries => "CS".into(),
            RepClass::PositiveDiscrete => "PD".into(),
            RepClass::NegativeDiscrete => "ND".into(),
            RepClass::NonUnitaryUnbounded => "NUB".into(),
            RepClass::NonUnitaryBoundedBelow => "NBB".into(),
            RepClass::NonUnitaryBoundedAbove => "NBA".into(),
            RepClass::FiniteDimensional { dim } => format!("FD{dim}"),
            RepClass::BoundedUnclassified => "BOUNDED".into(),
        }
    }
}

impl fmt::Display for RepClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// Extreme weights of the bounded-above family (top state `z^{2 sigma}`) and
/// the bounded-below family (bottom state `z^{2 tau}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightData {
    pub casimir: C64,
    pub j0_max: Option<C64>,
    pub j0_min: Option<C64>,
    pub bounded_above: bool,
    pub bounded_below: bool,
}

impl WeightData {
    /// The representation parameter `j = sigma - tau`.
    pub fn j(&self) -> Option<C64> {
        self.j0_max.or(self.j0_min.map(|m| -m))
    }

    /// `N` when the two extreme weights sit on one ladder, `j0_max - j0_min = N`.
    pub fn ladder_span(&self, tol: &Tolerances) -> Option<usize> {
        match (self.j0_max, self.j0_min) {
            (Some(hi), Some(lo)) => level(hi - lo, tol),
            _ => None,
        }
    }
}

pub fn weight_data(sigma: C64, tau: C64) -> WeightData {
    let j = sigma - tau;
    WeightData { casimir: -j * (j + 1.0), j0_max: Some(j), j0_min: Some(-j), bounded_above: true, bounded_below: true }
}

/// Classes of the two hosting families and their common finite piece, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostClasses {
    pub bounded_below: RepClass,
    pub bounded_above: RepClass,
    pub finite: Option<RepClass>,
}

pub fn classify_representation(w: &WeightData, tol: &Tolerances) -> HostClasses {
    let Some(j) = w.j() else {
        return HostClasses {
            bounded_below: RepClass::BoundedUnclassified,
            bounded_above: RepClass::BoundedUnclassified,
            finite: None,
        };
    };
    if j.im.abs() > tol.half_integer {
        return HostClasses {
            bounded_below: RepClass::BoundedUnclassified,
            bounded_above: RepClass::BoundedUnclassified,
            finite: None,
        };
    }
    let finite = w.ladder_span(tol).map(|n| RepClass::FiniteDimensional { dim: n + 1 });
    if j.re < 0.0 && finite.is_none() {
        HostClasses { bounded_below: RepClass::PositiveDiscrete, bounded_above: RepClass::NegativeDiscrete, finite }
    } else {
        HostClasses {
            bounded_below: RepClass::NonUnitaryBoundedBelow,
            bounded_above: RepClass::NonUnitaryBoundedAbove,
            finite,
        }
    }
}

/// Casimir of the `dim`-dimensional representation.
pub fn finite_casimir(dim: usize) -> f64 {
    let d = dim as f64;
    (1.0 - d * d) / 4.0
}

/// One admissible class at a Casimir value.
///
/// For bounded classes the bounds are the extreme weights. For CS and NUB
/// they delimit the interval between the two crossings of `g(h) = c`, which
/// CS must avoid and NUB must enter. PS carries no bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaxonomyRow {
    pub casimir: f64,
    pub class: RepClass,
    pub h_bound_low: Option<f64>,
    pub h_bound_high: Option<f64>,
}

pub fn taxonomy_table(c_values: &[f64]) -> Vec<TaxonomyRow> {
    let mut rows = Vec::new();
    for &c in c_values {
        let row = |class, lo, hi| TaxonomyRow { casimir: c, class, h_bound_low: lo, h_bound_high: hi };
        if c >= 0.25 {
            rows.push(row(RepClass::PrincipalSeries, None, None));
        }
        let disc = 1.0 - 4.0 * c;
        if disc < 0.0 {
            continue;
        }
        let r = disc.sqrt();
        if c > 0.0 {
            if c < 0.25 {
                rows.push(row(RepClass::ComplementarySeries, Some((-1.0 - r) / 2.0), Some((-1.0 + r) / 2.0)));
            }
            rows.push(row(RepClass::PositiveDiscrete, Some((1.0 + r) / 2.0), None));
            rows.push(row(RepClass::NegativeDiscrete, None, Some((-1.0 + r) / 2.0)));
            if r > 0.0 {
                rows.push(row(RepClass::PositiveDiscrete, Some((1.0 - r) / 2.0), None));
                rows.push(row(RepClass::NegativeDiscrete, None, Some((-1.0 - r) / 2.0)));
            }
        } else {
            rows.push(row(RepClass::PositiveDiscrete, Some((1.0 + r) / 2.0), None));
            rows.push(row(RepClass::NegativeDiscrete, None, Some((-1.0 - r) / 2.0)));
            rows.push(row(RepClass::NonUnitaryBoundedBelow, Some((1.0 - r) / 2.0), None));
            rows.push(row(RepClass::NonUnitaryBoundedAbove, None, Some((-1.0 + r) / 2.0)));
            let d = r.round();
            if d >= 1.0 && (r - d).abs() <= 1e-9 {
                rows.push(row(RepClass::FiniteDimensional { dim: d as usize }, Some((1.0 - d) / 2.0), Some((d - 1.0) / 2.0)));
            }
        }
        if c < 0.25 {
            rows.push(row(RepClass::NonUnitaryUnbounded, Some((-1.0 - r) / 2.0), Some((-1.0 + r) / 2.0)));
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::su11::{casimir_value, GeneratorParams};

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    #[test]
    fn weights_for_j_one() {
        let w = weight_data(r(1.0), r(0.0));
        assert_eq!(w.casimir, r(-2.0));
        assert_eq!(w.j0_max, Some(r(1.0)));
        assert_eq!(w.j0_min, Some(r(-1.0)));
        let h = classify_representation(&w, &Tolerances::default());
        assert_eq!(h.finite, Some(RepClass::FiniteDimensional { dim: 3 }));
        assert_eq!(h.bounded_below, RepClass::NonUnitaryBoundedBelow);
    }

    #[test]
    fn singlet_and_ladder_span() {
        let tol = Tolerances::default();
        let w = weight_data(c64(0.3, 0.1), c64(0.3, 0.1));
        assert_eq!(w.j0_max, w.j0_min);
        assert_eq!(w.ladder_span(&tol), Some(0));
        let w = weight_data(c64(2.5, 0.4), c64(0.0, 0.4));
        assert_eq!(w.ladder_span(&tol), Some(5));
    }

    #[test]
    fn negative_j_is_discrete_series() {
        let h = classify_representation(&weight_data(r(-0.7), r(0.0)), &Tolerances::default());
        assert_eq!((h.bounded_below, h.bounded_above), (RepClass::PositiveDiscrete, RepClass::NegativeDiscrete));
        assert_eq!(h.finite, None);
    }

    #[test]
    fn generic_positive_j_has_no_finite_piece() {
        let h = classify_representation(&weight_data(r(0.3), r(0.0)), &Tolerances::default());
        assert_eq!(
            h,
            HostClasses {
                bounded_below: RepClass::NonUnitaryBoundedBelow,
                bounded_above: RepClass::NonUnitaryBoundedAbove,
                finite: None
            }
        );
    }

    #[test]
    fn complex_j_is_unclassified() {
        let h = classify_representation(&weight_data(c64(1.0, 0.5), r(0.0)), &Tolerances::default());
        assert_eq!(h.bounded_below, RepClass::BoundedUnclassified);
    }

    #[test]
    fn casimir_matches_generators() {
        let (s, t) = (c64(0.8, -0.3), c64(-0.1, 0.6));
        assert_eq!(weight_data(s, t).casimir, casimir_value(&GeneratorParams::new(s, t)));
    }

    #[test]
    fn table_vertex_and_discrete_bounds() {
        let rows = taxonomy_table(&[0.25]);
        assert!(rows.iter().any(|r| r.class == RepClass::NegativeDiscrete && r.h_bound_high == Some(-0.5)));
        assert!(rows.iter().any(|r| r.class == RepClass::PrincipalSeries));

        let rows = taxonomy_table(&[-2.0]);
        let pd = rows.iter().find(|r| r.class == RepClass::PositiveDiscrete).unwrap();
        let nd = rows.iter().find(|r| r.class == RepClass::NegativeDiscrete).unwrap();
        assert_eq!((pd.h_bound_low, nd.h_bound_high), (Some(2.0), Some(-2.0)));
        assert!(rows.iter().any(|r| r.class == RepClass::FiniteDimensional { dim: 3 }));
    }

    #[test]
    fn table_singlet_at_zero() {
        let rows = taxonomy_table(&[0.0]);
        let fd = rows.iter().find(|r| matches!(r.class, RepClass::FiniteDimensional { .. })).unwrap();
        assert_eq!(fd.class, RepClass::FiniteDimensional { dim: 1 });
        assert_eq!((fd.h_bound_low, fd.h_bound_high), (Some(0.0), Some(0.0)));
    }

    #[test]
    fn finite_casimir_identity() {
        for d in 1..20 {
            let c = finite_casimir(d);
            let j = (d as f64 - 1.0) / 2.0;
            assert!((c + j * (j + 1.0)).abs() < 1e-12);
        }
    }
}
