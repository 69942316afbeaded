//! Solve for the generator parameters `sigma`, `tau` and the ansatz coefficients.
//!
//! `sigma` comes from the degree +1 part, `tau` from the degree -1 part:
//!
//! ```text
//! a7 = -2 sigma [a4 - a0 (1 - 2 sigma)]
//! a9 = -2 tau   [a6 + a2 (2 tau - 1)]
//! ```
//!
//! Each is a quadratic, a linear equation, or vacuous depending on which
//! coefficients vanish. The two patterns `a0 = a4 = 0, a7 != 0` and
//! `a2 = a6 = 0, a9 != 0` admit no solution at all.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canonical::GenericCoefficients;
use crate::error::{HeunError, Result};
use crate::su11::CCoefficients;
use crate::tol::Tolerances;
use crate::C64;

/// Which root of the defining equation a value is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `+` sign in front of the square root.
    Plus,
    /// `-` sign in front of the square root.
    Minus,
    /// Both signs coincide (vanishing discriminant).
    Double,
    /// Unique root of a linear equation.
    Linear,
    /// `tau = 0` imposed because `z = 0` is an ordinary point.
    Forced,
    /// Value picked by the caller for a free parameter.
    Chosen,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
            Branch::Double => "double",
            Branch::Linear => "linear",
            Branch::Forced => "forced",
            Branch::Chosen => "chosen",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: C64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonAlgebraizableReason {
    /// `a0 = a4 = 0` but `a7 != 0`.
    RaisingPart,
    /// `a2 = a6 = 0` but `a9 != 0`.
    LoweringPart,
}

impl fmt::Display for NonAlgebraizableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonAlgebraizableReason::RaisingPart => f.write_str("a₀=a₄=0, a₇≠0"),
            NonAlgebraizableReason::LoweringPart => f.write_str("a₂=a₆=0, a₉≠0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamResolution {
    /// One or two roots.
    Fixed(Vec<Root>),
    /// Any value algebraizes the equation.
    Free,
    NonAlgebraizable(NonAlgebraizableReason),
}

impl ParamResolution {
    pub fn roots(&self) -> &[Root] {
        match self {
            ParamResolution::Fixed(r) => r,
            _ => &[],
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, ParamResolution::Free)
    }

    pub fn reason(&self) -> Option<NonAlgebraizableReason> {
        match self {
            ParamResolution::NonAlgebraizable(r) => Some(*r),
            _ => None,
        }
    }
}

/// One concrete `(sigma, tau)` choice with its ansatz coefficients.
///
/// A free parameter is represented by the value 0 tagged [`Branch::Chosen`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzChoice {
    pub sigma: Root,
    pub tau: Root,
    pub coefficients: CCoefficients,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraizationResult {
    pub sigma: ParamResolution,
    pub tau: ParamResolution,
    pub choices: Vec<AnsatzChoice>,
}

impl AlgebraizationResult {
    pub fn is_algebraizable(&self) -> bool {
        self.reason().is_none()
    }

    /// First failing condition, checking the raising part before the lowering part.
    pub fn reason(&self) -> Option<NonAlgebraizableReason> {
        self.sigma.reason().or_else(|| self.tau.reason())
    }
}

/// Roots of `A r^2 + B r + C = 0`, labelled by the sign of `sqrt(B^2 - 4AC)`.
///
/// The smaller root is recovered from the product `C/A` to avoid cancellation.
fn labelled_quadratic(a: C64, b: C64, c: C64, tol: &Tolerances) -> Vec<Root> {
    let disc = b * b - 4.0 * a * c;
    let s = disc.sqrt();
    let scale = b.norm().max((a * c).norm().sqrt()).max(f64::MIN_POSITIVE);
    if s.norm() <= tol.identity * scale {
        return vec![Root { value: -b / (2.0 * a), branch: Branch::Double }];
    }
    let plus_num = -b + s;
    let minus_num = -b - s;
    let (plus, minus) = if plus_num.norm() >= minus_num.norm() {
        let p = plus_num / (2.0 * a);
        (p, c / (a * p))
    } else {
        let m = minus_num / (2.0 * a);
        (c / (a * m), m)
    };
    vec![Root { value: plus, branch: Branch::Plus }, Root { value: minus, branch: Branch::Minus }]
}

pub fn solve_sigma(c: &GenericCoefficients, tol: &Tolerances) -> ParamResolution {
    let (a0, a4, a7) = (c[0], c[4], c[7]);
    if !tol.is_zero(a0) {
        // 4 a0 s^2 + 2 (a4 - a0) s + a7 = 0
        ParamResolution::Fixed(labelled_quadratic(4.0 * a0, 2.0 * (a4 - a0), a7, tol))
    } else if !tol.is_zero(a4) {
        ParamResolution::Fixed(vec![Root { value: -a7 / (2.0 * a4), branch: Branch::Linear }])
    } else if tol.is_zero(a7) {
        ParamResolution::Free
    } else {
        ParamResolution::NonAlgebraizable(NonAlgebraizableReason::RaisingPart)
    }
}

pub fn solve_tau(c: &GenericCoefficients, tol: &Tolerances) -> ParamResolution {
    let (a2, a6, a9) = (c[2], c[6], c[9]);
    if !tol.is_zero(c[3]) {
        ParamResolution::Fixed(vec![Root { value: C64::new(0.0, 0.0), branch: Branch::Forced }])
    } else if !tol.is_zero(a2) {
        // 4 a2 t^2 + 2 (a6 - a2) t + a9 = 0
        ParamResolution::Fixed(labelled_quadratic(4.0 * a2, 2.0 * (a6 - a2), a9, tol))
    } else if !tol.is_zero(a6) {
        ParamResolution::Fixed(vec![Root { value: -a9 / (2.0 * a6), branch: Branch::Linear }])
    } else if tol.is_zero(a9) {
        ParamResolution::Free
    } else {
        ParamResolution::NonAlgebraizable(NonAlgebraizableReason::LoweringPart)
    }
}

/// `a7 + 2 sigma [a4 - a0 (1 - 2 sigma)]`.
pub fn sigma_identity_defect(c: &GenericCoefficients, sigma: C64) -> C64 {
    c[7] + 2.0 * sigma * (c[4] - c[0] * (1.0 - 2.0 * sigma))
}

/// `a9 + 2 tau [a6 + a2 (2 tau - 1)]`.
pub fn tau_identity_defect(c: &GenericCoefficients, tau: C64) -> C64 {
    c[9] + 2.0 * tau * (c[6] + c[2] * (2.0 * tau - 1.0))
}

fn identity_scale(x: C64, y: C64, z: C64, r: C64) -> f64 {
    let r = r.norm();
    1.0 + z.norm() + 2.0 * r * (y.norm() + x.norm() * (1.0 + 2.0 * r))
}

pub fn c_coefficients(c: &GenericCoefficients, sigma: C64, tau: C64, tol: &Tolerances) -> Result<CCoefficients> {
    let ds = sigma_identity_defect(c, sigma).norm() / identity_scale(c[0], c[4], c[7], sigma);
    if ds > tol.identity {
        return Err(HeunError::InconsistentParameters { identity: "a7 = -2 sigma [a4 - a0 (1 - 2 sigma)]", defect: ds });
    }
    let dt = tau_identity_defect(c, tau).norm() / identity_scale(c[2], c[6], c[9], tau);
    if dt > tol.identity {
        return Err(HeunError::InconsistentParameters { identity: "a9 = -2 tau [a6 + a2 (2 tau - 1)]", defect: dt });
    }
    if !tol.is_zero(c[3]) && !tol.is_zero(tau) {
        return Err(HeunError::InconsistentParameters { identity: "tau = 0 at an ordinary point", defect: tau.norm() });
    }
    let c_0 = c[5] + 2.0 * c[1] * (sigma + tau);
    Ok(CCoefficients {
        c_p0: c[0],
        c_plus: c[4] - c[0] * (1.0 - 3.0 * sigma - tau),
        c_0m: c[2],
        c_minus: c[6] + c[2] * (sigma + 3.0 * tau),
        c_pm: c[1],
        c_0,
        c_mm: c[3],
        c: c[8] + c_0 * (sigma + tau) - 2.0 * c[1] * tau * (1.0 + 2.0 * sigma),
    })
}

/// Forward map from ansatz coefficients back to `a0..a9`.
///
/// `a3 = c--` only reproduces the triconfluent operator when `tau = 0`; for
/// other `tau` the `J-J-` term also feeds lower-order pieces.
pub fn reconstruct_coefficients(cc: &CCoefficients, sigma: C64, tau: C64) -> [C64; 10] {
    let a0 = cc.c_p0;
    let a4 = cc.c_plus + cc.c_p0 * (1.0 - 3.0 * sigma - tau);
    let a7 = -2.0 * sigma * (cc.c_plus - cc.c_p0 * (sigma + tau));
    let a2 = cc.c_0m;
    let a6 = cc.c_minus - cc.c_0m * (sigma + 3.0 * tau);
    let a9 = -2.0 * tau * (cc.c_minus - cc.c_0m * (1.0 + sigma + tau));
    let a1 = cc.c_pm;
    let a5 = cc.c_0 - 2.0 * cc.c_pm * (sigma + tau);
    let a8 = cc.c - cc.c_0 * (sigma + tau) + 2.0 * cc.c_pm * tau * (1.0 + 2.0 * sigma);
    [a0, a1, a2, cc.c_mm, a4, a5, a6, a7, a8, a9]
}

pub fn algebraize(c: &GenericCoefficients, tol: &Tolerances) -> Result<AlgebraizationResult> {
    let sigma = solve_sigma(c, tol);
    let tau = solve_tau(c, tol);
    let chosen = [Root { value: C64::new(0.0, 0.0), branch: Branch::Chosen }];
    let mut choices = Vec::new();
    let candidates = |r: &ParamResolution| -> Option<Vec<Root>> {
        match r {
            ParamResolution::Fixed(v) => Some(v.clone()),
            ParamResolution::Free => Some(chosen.to_vec()),
            ParamResolution::NonAlgebraizable(_) => None,
        }
    };
    if let (Some(ss), Some(ts)) = (candidates(&sigma), candidates(&tau)) {
        for s in &ss {
            for t in &ts {
                let coefficients = c_coefficients(c, s.value, t.value, tol)?;
                choices.push(AnsatzChoice { sigma: *s, tau: *t, coefficients });
            }
        }
    }
    Ok(AlgebraizationResult { sigma, tau, choices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::canonical::*;
    use proptest::prelude::*;

    fn r(x: f64) -> C64 {
        c64(x, 0.0)
    }

    fn values(p: &ParamResolution) -> Vec<C64> {
        let mut v: Vec<C64> = p.roots().iter().map(|r| r.value).collect();
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v
    }

    fn close(a: &[C64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12)
    }

    fn ghe(gamma: f64, alpha: f64, beta: f64) -> GenericCoefficients {
        let p = GeneralHeunParams::new(r(gamma), r(1.0), r(alpha), r(beta), r(1.0), r(2.0));
        to_generic(&HeunEquation::Ghe(p)).unwrap()
    }

    #[test]
    fn ghe_sigma_and_tau() {
        let tol = Tolerances::default();
        let c = ghe(0.5, 2.0, 3.0);
        assert!(close(&values(&solve_sigma(&c, &tol)), &[-1.5, -1.0]));
        assert!(close(&values(&solve_tau(&c, &tol)), &[0.0, 0.25]));
    }

    #[test]
    fn che_sigma_cases() {
        let tol = Tolerances::default();
        let che = |kappa: f64, mu: f64, nu: f64| {
            let p = ConfluentHeunParams { kappa: r(kappa), gamma: r(0.3), delta: r(1.0), mu: r(mu), nu: r(nu) };
            to_generic(&HeunEquation::Che(p)).unwrap()
        };
        assert_eq!(
            solve_sigma(&che(0.0, 1.0, 0.0), &tol),
            ParamResolution::NonAlgebraizable(NonAlgebraizableReason::RaisingPart)
        );
        assert_eq!(solve_sigma(&che(0.0, 0.5, -0.5), &tol), ParamResolution::Free);
        let s = solve_sigma(&che(2.0, 1.0, 3.0), &tol);
        assert_eq!(s.roots()[0].branch, Branch::Linear);
        assert!((s.roots()[0].value + 1.0).norm() < 1e-15);
    }

    #[test]
    fn dhe_tau_cases() {
        let tol = Tolerances::default();
        let dhe = |am1: f64, bm1: f64| {
            let p = DoublyConfluentHeunParams { alpha1: r(1.0), alpham1: r(am1), b1: r(0.0), b0: r(0.0), bm1: r(bm1) };
            to_generic(&HeunEquation::Dhe(p)).unwrap()
        };
        assert!(close(&values(&solve_tau(&dhe(2.0, 3.0), &tol)), &[-0.5]));
        assert_eq!(
            solve_tau(&dhe(0.0, 1.0), &tol),
            ParamResolution::NonAlgebraizable(NonAlgebraizableReason::LoweringPart)
        );
        assert_eq!(NonAlgebraizableReason::RaisingPart.to_string(), "a₀=a₄=0, a₇≠0");
    }

    #[test]
    fn double_root_collapses() {
        let tol = Tolerances::default();
        // (a0 - a4)^2 = 4 a0 a7 with a0 = 1, a4 = 3, a7 = 1.
        let c = GenericCoefficients::from_real([1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        let s = solve_sigma(&c, &tol);
        assert_eq!(s.roots().len(), 1);
        assert_eq!(s.roots()[0].branch, Branch::Double);
        assert!((s.roots()[0].value + 0.5).norm() < 1e-12);
    }

    #[test]
    fn diagonal_dhe_coefficients() {
        let tol = Tolerances::default();
        let c = GenericCoefficients::from_real([0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.7, 0.0]).unwrap();
        let cc = c_coefficients(&c, r(0.0), r(0.0), &tol).unwrap();
        assert_eq!(cc.c_pm, r(1.0));
        assert_eq!(cc.c_0, r(1.0));
        assert_eq!(cc.c, r(0.7));
        for x in [cc.c_p0, cc.c_plus, cc.c_0m, cc.c_minus, cc.c_mm] {
            assert_eq!(x, r(0.0));
        }
    }

    #[test]
    fn ghe_c_plus_and_the_branch() {
        let tol = Tolerances::default();
        let c = ghe(0.5, 2.0, 3.0);
        let cc = c_coefficients(&c, r(-1.0), r(0.0), &tol).unwrap();
        assert_eq!(cc.c_p0, r(1.0));
        assert!((cc.c_plus - 2.0).norm() < 1e-15);
        let back = reconstruct_coefficients(&cc, r(-1.0), r(0.0));
        for i in 0..10 {
            assert!((back[i] - c[i]).norm() < 1e-12, "a{i}");
        }

        let t = TriconfluentHeunParams { alpha: r(1.0), beta: r(2.0), gamma: r(0.5) };
        let c = to_generic(&HeunEquation::The(t)).unwrap();
        let res = algebraize(&c, &tol).unwrap();
        assert_eq!(res.choices.len(), 1);
        let ch = res.choices[0];
        assert_eq!(ch.sigma.value, r(0.0));
        assert_eq!(ch.tau.branch, Branch::Forced);
        assert_eq!(ch.coefficients.c_mm, r(1.0));
        assert_eq!(ch.coefficients.c_plus, r(-3.0));
    }

    #[test]
    fn inconsistent_pair_is_rejected() {
        let tol = Tolerances::default();
        let c = ghe(0.5, 2.0, 3.0);
        assert!(matches!(
            c_coefficients(&c, r(0.3), r(0.0), &tol),
            Err(HeunError::InconsistentParameters { .. })
        ));
    }

    #[test]
    fn zero_ansatz_reconstructs_zero() {
        let back = reconstruct_coefficients(&CCoefficients::zero(), c64(0.3, 1.0), c64(-2.0, 0.5));
        assert!(back.iter().all(|x| x.norm() == 0.0));
    }

    fn arb_c64() -> impl Strategy<Value = C64> {
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| c64(a, b))
    }

    proptest! {
        #[test]
        fn root_identities_hold(a in proptest::collection::vec(arb_c64(), 10)) {
            let tol = Tolerances::default();
            let mut arr = [C64::new(0.0, 0.0); 10];
            arr.copy_from_slice(&a);
            arr[3] = C64::new(0.0, 0.0);
            let c = GenericCoefficients::new(arr).unwrap();
            for s in solve_sigma(&c, &tol).roots() {
                prop_assert!(sigma_identity_defect(&c, s.value).norm() <= 1e-9 * identity_scale(c[0], c[4], c[7], s.value));
            }
            for t in solve_tau(&c, &tol).roots() {
                prop_assert!(tau_identity_defect(&c, t.value).norm() <= 1e-9 * identity_scale(c[2], c[6], c[9], t.value));
            }
        }

        #[test]
        fn c_coefficients_round_trip(a in proptest::collection::vec(arb_c64(), 10)) {
            let tol = Tolerances::default();
            let mut arr = [C64::new(0.0, 0.0); 10];
            arr.copy_from_slice(&a);
            arr[3] = C64::new(0.0, 0.0);
            let c = GenericCoefficients::new(arr).unwrap();
            let res = algebraize(&c, &tol).unwrap();
            for ch in &res.choices {
                let back = reconstruct_coefficients(&ch.coefficients, ch.sigma.value, ch.tau.value);
                for i in 0..10 {
                    prop_assert!((back[i] - c[i]).norm() <= 1e-10 * c.scale().max(ch.sigma.value.norm()).max(ch.tau.value.norm()));
                }
            }
        }

        #[test]
        fn zero_tau_root_when_a9_vanishes(a2 in arb_c64(), a6 in arb_c64()) {
            prop_assume!(a2.norm() > 1e-3);
            let tol = Tolerances::default();
            let c = GenericCoefficients::new([
                C64::new(1.0, 0.0), C64::new(0.0, 0.0), a2, C64::new(0.0, 0.0), C64::new(0.0, 0.0),
                C64::new(0.0, 0.0), a6, C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0),
            ]).unwrap();
            prop_assert!(solve_tau(&c, &tol).roots().iter().any(|t| t.value.norm() < 1e-12));
        }
    }
}
