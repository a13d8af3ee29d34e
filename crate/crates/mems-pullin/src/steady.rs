//! Stationary solutions, their linear stability, and the heteroclinic
//! damping threshold.
//!
//! Stationary solutions of the model solve `g(x) = -lambda` with
//! `g(x) = x (1 + x)^2`. On `(-1, 0)` the cubic has two roots
//! `x1(lambda) < -1/3 < x2(lambda)` for `lambda < 4/27`, one double root
//! `-1/3` at the static pull-in value `lambda* = 4/27`, and none above it.
//! The linearization at an equilibrium has eigenvalues
//!
//! ```text
//! mu(+-) = -alpha/2 +- sqrt((alpha/2)^2 - df/dx)
//! ```
//!
//! making `x1` a saddle and `x2` a stable node or focus depending on the
//! damping.

use num_complex::Complex64;
use serde::Serialize;

use crate::model::{cubic_g, dforce_dx, force, Params, GAP_GUARD};
use crate::{Error, Result};

/// Loads within this distance of 4/27 are reported as degenerate; below the
/// root solver's resolution the Pair/Degenerate distinction is meaningless.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Residual target for the returned roots: `|g(x) + lambda| <= 1e-14`.
const RESIDUAL_TOL: f64 = 1e-14;

/// Looser residual used to sanity-check points handed to [`stability`].
const EQUILIBRIUM_CHECK_TOL: f64 = 1e-10;

/// The static pull-in value `lambda* = 4/27`, the largest load with
/// stationary solutions.
pub fn static_pullin() -> f64 {
    4.0 / 27.0
}

/// The stationary-solution set at a given load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Equilibria {
    /// `lambda < 4/27`: saddle `x1` and stable equilibrium `x2`, with
    /// `-1 < x1 < -1/3 < x2 < 0`.
    Pair { x1: f64, x2: f64 },
    /// `lambda = 4/27` within [`DEGENERACY_TOL`]: the double root `-1/3`.
    Degenerate { x: f64 },
    /// `lambda > 4/27`: no stationary solutions.
    None,
}

impl Equilibria {
    /// The saddle abscissa, when one exists (`Pair` only).
    pub fn saddle(&self) -> Option<f64> {
        match *self {
            Equilibria::Pair { x1, .. } => Some(x1),
            _ => Option::None,
        }
    }

    /// The stable-equilibrium abscissa, when one exists (`Pair` only).
    pub fn stable(&self) -> Option<f64> {
        match *self {
            Equilibria::Pair { x2, .. } => Some(x2),
            _ => Option::None,
        }
    }

    pub fn pair(&self) -> Option<(f64, f64)> {
        match *self {
            Equilibria::Pair { x1, x2 } => Some((x1, x2)),
            _ => Option::None,
        }
    }
}

/// Solve `g(x) = -lambda` on `(-1, 0)`.
///
/// Roots are bracketed on `(-1 + eps, -1/3)` and `(-1/3, -eps)` and refined
/// by safeguarded Newton to `|g(x) + lambda| <= 1e-14`. `lambda > 4/27`
/// yields [`Equilibria::None`] (a valid answer, not an error).
pub fn equilibria(lambda: f64) -> Result<Equilibria> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::BadLambda { lambda });
    }
    let lstar = static_pullin();
    if (lambda - lstar).abs() <= DEGENERACY_TOL {
        return Ok(Equilibria::Degenerate { x: -1.0 / 3.0 });
    }
    if lambda > lstar {
        return Ok(Equilibria::None);
    }
    let x1 = cubic_root(lambda, -1.0 + GAP_GUARD, -1.0 / 3.0);
    let x2 = cubic_root(lambda, -1.0 / 3.0, -GAP_GUARD);
    Ok(Equilibria::Pair { x1, x2 })
}

/// Bracketed Newton on `h(x) = g(x) + lambda`.
///
/// The bracket must straddle a sign change; Newton steps that leave the
/// current bracket fall back to bisection, so convergence is unconditional.
fn cubic_root(lambda: f64, mut lo: f64, mut hi: f64) -> f64 {
    let h = |x: f64| cubic_g(x) + lambda;
    let lo_positive = h(lo) > 0.0;
    debug_assert!(lo_positive != (h(hi) > 0.0));
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let hx = h(x);
        if hx.abs() <= 0.1 * RESIDUAL_TOL {
            return x;
        }
        if (hx > 0.0) == lo_positive {
            lo = x;
        } else {
            hi = x;
        }
        // h'(x) = 3x^2 + 4x + 1
        let d = (3.0 * x + 1.0) * (x + 1.0);
        let mut next = x - hx / d;
        if !next.is_finite() || next <= lo.min(hi) || next >= lo.max(hi) {
            next = 0.5 * (lo + hi);
        }
        if next == x {
            return x;
        }
        x = next;
    }
    x
}

/// Linearization labels at an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StabilityLabel {
    Saddle,
    StableNode,
    StableFocus,
    DegenerateCenterDirection,
}

impl std::fmt::Display for StabilityLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StabilityLabel::Saddle => "saddle",
            StabilityLabel::StableNode => "stable node",
            StabilityLabel::StableFocus => "stable focus",
            StabilityLabel::DegenerateCenterDirection => "degenerate center direction",
        };
        f.write_str(s)
    }
}

/// Eigenvalues and label of the linearization at `x_eq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub x: f64,
    pub mu_plus: Complex64,
    pub mu_minus: Complex64,
    pub label: StabilityLabel,
    /// `|force(x_eq, lambda)|`, the accepted equilibrium residual.
    pub residual: f64,
}

/// Node/focus boundary ties within this distance are labeled `StableNode`;
/// the dynamics are identical to leading order.
const NODE_FOCUS_TIE: f64 = 1e-12;

/// Stiffness this close to zero is treated as the degenerate fold.
const DEGENERATE_STIFFNESS: f64 = 1e-11;

/// Classify the linearization at `x_eq` for the given parameters.
///
/// `x_eq` must be an equilibrium to residual `1e-10`, otherwise
/// [`Error::NotAnEquilibrium`] reports the offending residual.
pub fn stability(x_eq: f64, params: &Params) -> Result<StabilityReport> {
    let lambda = params.lambda();
    let alpha = params.alpha();
    let residual = force(x_eq, lambda)?.abs();
    if residual > EQUILIBRIUM_CHECK_TOL {
        return Err(Error::NotAnEquilibrium { x: x_eq, lambda, residual });
    }
    let fx = dforce_dx(x_eq, lambda)?;
    let half = 0.5 * alpha;

    let (mu_plus, mu_minus, label) = if fx.abs() <= DEGENERATE_STIFFNESS {
        // Fold point: mu+ = 0 and mu- = -alpha exactly.
        (
            Complex64::new(0.0, 0.0),
            Complex64::new(-alpha, 0.0),
            StabilityLabel::DegenerateCenterDirection,
        )
    } else if fx < 0.0 {
        let root = (half * half - fx).sqrt();
        (
            Complex64::new(-half + root, 0.0),
            Complex64::new(-half - root, 0.0),
            StabilityLabel::Saddle,
        )
    } else {
        let node_gap = alpha - 2.0 * fx.sqrt();
        if node_gap >= -NODE_FOCUS_TIE {
            let root = (half * half - fx).max(0.0).sqrt();
            (
                Complex64::new(-half + root, 0.0),
                Complex64::new(-half - root, 0.0),
                StabilityLabel::StableNode,
            )
        } else {
            let im = (fx - half * half).sqrt();
            (
                Complex64::new(-half, im),
                Complex64::new(-half, -im),
                StabilityLabel::StableFocus,
            )
        }
    };
    Ok(StabilityReport { x: x_eq, mu_plus, mu_minus, label, residual })
}

/// The Fisher-type slope `s(lambda) = df/dx(x2(lambda), lambda) > 0`.
///
/// Equals the supremum of `f(x, lambda) / (x - x2(lambda))` over the segment
/// between the equilibria: the quotient is `df/dx` at an intermediate point,
/// and the stiffness is increasing in `x`.
pub fn fisher_slope(lambda: f64) -> Result<f64> {
    match equilibria(lambda)? {
        Equilibria::Pair { x2, .. } => dforce_dx(x2, lambda),
        Equilibria::Degenerate { .. } => Ok(0.0),
        Equilibria::None => Err(Error::NoEquilibria { lambda }),
    }
}

/// Damping above `2 sqrt(s(lambda))` guarantees a heteroclinic connection
/// from the saddle to `(x2, 0)` (equivalently, `x2` is a stable node).
pub fn heteroclinic_threshold(lambda: f64) -> Result<f64> {
    Ok(2.0 * fisher_slope(lambda)?.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(lambda: f64) -> (f64, f64) {
        equilibria(lambda).unwrap().pair().unwrap()
    }

    #[test]
    fn split_pair_at_one_eighth() {
        // x1 = -1/2 exactly; x2 = (-3 + sqrt 5)/4 from factoring the cubic.
        let (x1, x2) = pair(0.125);
        assert!((x1 + 0.5).abs() <= 1e-12);
        assert!((x2 - (-3.0 + 5.0f64.sqrt()) / 4.0).abs() <= 1e-12);
    }

    #[test]
    fn degenerate_and_absent() {
        assert_eq!(
            equilibria(4.0 / 27.0).unwrap(),
            Equilibria::Degenerate { x: -1.0 / 3.0 }
        );
        assert_eq!(equilibria(0.2).unwrap(), Equilibria::None);
        assert!(matches!(
            equilibria(static_pullin() - 1e-6).unwrap(),
            Equilibria::Pair { .. }
        ));
        assert_eq!(equilibria(static_pullin() + 1e-6).unwrap(), Equilibria::None);
        assert!(equilibria(0.0).is_err());
        assert!(equilibria(-0.1).is_err());
    }

    #[test]
    fn roots_meet_residual_contract() {
        for k in 1..200 {
            let lambda = static_pullin() * k as f64 / 200.0;
            let (x1, x2) = pair(lambda);
            assert!(-1.0 < x1 && x1 < -1.0 / 3.0 && -1.0 / 3.0 < x2 && x2 < 0.0);
            assert!((cubic_g(x1) + lambda).abs() <= 1e-14, "x1 residual at {lambda}");
            assert!((cubic_g(x2) + lambda).abs() <= 1e-14, "x2 residual at {lambda}");
        }
    }

    #[test]
    fn roots_move_monotonically() {
        let mut prev = pair(static_pullin() / 101.0);
        for k in 2..=100 {
            let lambda = static_pullin() * k as f64 / 101.0;
            let (x1, x2) = pair(lambda);
            assert!(x1 > prev.0, "x1 increasing in lambda");
            assert!(x2 < prev.1, "x2 decreasing in lambda");
            prev = (x1, x2);
        }
    }

    #[test]
    fn small_load_limits() {
        let (x1, x2) = pair(1e-6);
        assert!((x1 + 1.0).abs() < 1e-2);
        assert!(x2.abs() < 1e-2);
    }

    #[test]
    fn saddle_report() {
        let (x1, _) = pair(0.13);
        let p = Params::new(0.13, 1.0).unwrap();
        let r = stability(x1, &p).unwrap();
        assert_eq!(r.label, StabilityLabel::Saddle);
        assert_eq!(r.mu_plus.im, 0.0);
        assert!(r.mu_minus.re < 0.0 && r.mu_plus.re > 0.0);
    }

    #[test]
    fn conservative_center_direction() {
        let (_, x2) = pair(0.13);
        let p = Params::conservative(0.13).unwrap();
        let r = stability(x2, &p).unwrap();
        // Purely imaginary pair: the center direction of the undamped system.
        assert_eq!(r.mu_plus.re, 0.0);
        assert_eq!(r.mu_minus.re, 0.0);
        let fx = dforce_dx(x2, 0.13).unwrap();
        assert!((r.mu_plus.im - fx.sqrt()).abs() <= 1e-14);
        assert_eq!(r.label, StabilityLabel::StableFocus);
    }

    #[test]
    fn degenerate_eigenvalues() {
        for alpha in [0.0, 0.7, 3.0] {
            let p = Params::new(4.0 / 27.0, alpha).unwrap();
            let r = stability(-1.0 / 3.0, &p).unwrap();
            assert_eq!(r.label, StabilityLabel::DegenerateCenterDirection);
            assert_eq!(r.mu_plus, Complex64::new(0.0, 0.0));
            assert_eq!(r.mu_minus, Complex64::new(-alpha, 0.0));
        }
    }

    #[test]
    fn node_focus_boundary() {
        let (_, x2) = pair(0.13);
        let fx = dforce_dx(x2, 0.13).unwrap();
        let alpha_c = 2.0 * fx.sqrt();
        let node = stability(x2, &Params::new(0.13, alpha_c * (1.0 + 1e-6)).unwrap()).unwrap();
        assert_eq!(node.label, StabilityLabel::StableNode);
        let focus = stability(x2, &Params::new(0.13, alpha_c * 0.9).unwrap()).unwrap();
        assert_eq!(focus.label, StabilityLabel::StableFocus);
        // Boundary tie resolves to the node label.
        let tie = stability(x2, &Params::new(0.13, alpha_c).unwrap()).unwrap();
        assert_eq!(tie.label, StabilityLabel::StableNode);
    }

    #[test]
    fn rejects_non_equilibrium() {
        let p = Params::new(0.13, 1.0).unwrap();
        match stability(-0.2, &p) {
            Err(Error::NotAnEquilibrium { residual, .. }) => assert!(residual > 1e-3),
            other => panic!("expected NotAnEquilibrium, got {other:?}"),
        }
    }

    #[test]
    fn fisher_slope_is_sup_of_quotient() {
        // Brute-force the sup of f(x)/(x - x2) over the inter-equilibria
        // segment; refined near x2 where the sup is attained.
        for lambda in [0.05, 0.10, 0.13] {
            let (x1, x2) = pair(lambda);
            let s = fisher_slope(lambda).unwrap();
            let mut sup = f64::NEG_INFINITY;
            let n = 4000;
            for i in 0..n {
                let x = x1 + (x2 - 1e-8 - x1) * i as f64 / n as f64;
                let q = force(x, lambda).unwrap() / (x - x2);
                sup = sup.max(q);
            }
            for k in 4..=8 {
                let x = x2 - 10f64.powi(-k);
                let q = force(x, lambda).unwrap() / (x - x2);
                sup = sup.max(q);
            }
            assert!((sup - s).abs() <= 1e-6, "lambda={lambda}: sup {sup} vs s {s}");
            assert!(sup <= s + 1e-12, "quotient must not exceed the slope");
        }
    }

    #[test]
    fn fisher_slope_vanishes_at_fold() {
        let mut prev = f64::INFINITY;
        for eps in [1e-3, 1e-6, 1e-9] {
            let s = fisher_slope(static_pullin() - eps).unwrap();
            assert!(s > 0.0 && s < prev);
            prev = s;
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn heteroclinic_threshold_closed_form() {
        for lambda in [0.05, 0.125, 0.14] {
            let (_, x2) = pair(lambda);
            let w = 1.0 + x2;
            let closed = 2.0 * (1.0 - 2.0 * lambda / (w * w * w)).sqrt();
            assert!((heteroclinic_threshold(lambda).unwrap() - closed).abs() <= 1e-14);
        }
    }

    proptest! {
        /// Residuals and ordering across the whole load range.
        #[test]
        fn pair_contract(lambda in 1e-6f64..0.1481) {
            prop_assume!((lambda - static_pullin()).abs() > 1e-10);
            match equilibria(lambda).unwrap() {
                Equilibria::Pair { x1, x2 } => {
                    prop_assert!(lambda < static_pullin());
                    prop_assert!(-1.0 < x1 && x1 < -1.0/3.0);
                    prop_assert!(-1.0/3.0 < x2 && x2 < 0.0);
                    prop_assert!((cubic_g(x1) + lambda).abs() <= 1e-14);
                    prop_assert!((cubic_g(x2) + lambda).abs() <= 1e-14);
                    // Saddle/stable stiffness signs.
                    prop_assert!(dforce_dx(x1, lambda).unwrap() < 0.0);
                    prop_assert!(dforce_dx(x2, lambda).unwrap() > 0.0);
                }
                Equilibria::None => prop_assert!(lambda > static_pullin()),
                Equilibria::Degenerate { .. } => prop_assert!(false, "excluded by assume"),
            }
        }

        /// Vieta: mu+ * mu- = df/dx and mu+ + mu- = -alpha.
        #[test]
        fn eigenvalue_vieta(
            lambda in 1e-4f64..0.148,
            alpha in 0.0f64..6.0,
            pick_saddle in proptest::bool::ANY,
        ) {
            prop_assume!(lambda < static_pullin() - 1e-9);
            let (x1, x2) = pair(lambda);
            let x = if pick_saddle { x1 } else { x2 };
            let p = Params::new(lambda, alpha).unwrap();
            let r = stability(x, &p).unwrap();
            let fx = dforce_dx(x, lambda).unwrap();
            let prod = r.mu_plus * r.mu_minus;
            let sum = r.mu_plus + r.mu_minus;
            prop_assert!((prod.re - fx).abs() <= 1e-12 * fx.abs().max(1.0));
            prop_assert!(prod.im.abs() <= 1e-12 * fx.abs().max(1.0));
            prop_assert!((sum.re + alpha).abs() <= 1e-12 * alpha.max(1.0));
            prop_assert!(sum.im.abs() <= 1e-12);
            prop_assert!(r.mu_minus.re <= r.mu_plus.re);
        }
    }
}
