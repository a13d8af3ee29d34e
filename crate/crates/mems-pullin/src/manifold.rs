//! Geometry of the saddle's stable manifold.
//!
//! Reversing time and reflecting velocity (`u = x - x1`, `v = -y`) turns the
//! stable manifold of the saddle into the unstable manifold of
//!
//! ```text
//! u' = v,    v' = alpha v - f(u + x1, lambda),
//! ```
//!
//! which leaves the origin along the direction of slope
//! `mu_plus = alpha/2 + sqrt((alpha/2)^2 - f_x(x1))` and, as long as `v > 0`,
//! is the graph of a function `v = Phi(u)` obeying
//!
//! ```text
//! dPhi/du = alpha - f(u + x1, lambda) / Phi,    Phi(0) = 0.
//! ```
//!
//! The branch is traced in two phases. Away from the axis the graph ODE is
//! integrated directly in `u`; it is self-correcting there, since transverse
//! perturbations decay when flowing away from the saddle along its unstable
//! manifold. Once `Phi` becomes small where the force is positive (the graph
//! slope is about to blow up), the tracer switches to the planar system
//! normalized to unit speed and locates the axis crossing `Phi(u_bar) = 0` by
//! bisection on the integrator's dense output.
//!
//! The crossing abscissa in original coordinates, `x_bar = u_bar + x1`,
//! carries the threshold information: the origin lies inside the basin
//! boundary exactly when the manifold arcs over it, so `x_bar < 0` is the
//! touchdown side and `x_bar > 0` (or no crossing at all) the stable side.

use serde::Serialize;

use crate::model::{self, Params};
use crate::rk45::{StepError, Stepper};
use crate::steady::{self, Equilibria};
use crate::{Error, Result};

/// Offset along the tangent line used to seed the trace off the saddle.
/// The linearization error there is O(offset^2), far below trace tolerance,
/// and it damps further while flowing out along the unstable direction.
const SEED_OFFSET: f64 = 1e-8;

/// Phase A hands over to the planar phase once `Phi` drops below this while
/// the force is positive.
const SWITCH_LEVEL: f64 = 1e-3;

/// Sample spacing cap in `u` (phase A) and arclength (phase B).
const RECORD_DU: f64 = 2e-3;
const RECORD_DS: f64 = 1e-2;

/// Attempted-step budget per phase; generous for every admissible `u_max`.
const MAX_STEPS: u64 = 2_000_000;

/// Below this `Phi`, interpolation slopes fall back to secants (the analytic
/// graph slope `alpha - f/Phi` is unusable near the axis).
const SLOPE_FLOOR: f64 = 1e-9;

/// A traced branch of the stable manifold in transformed coordinates,
/// recorded as graph samples `(u, Phi(u))` from the saddle to either the
/// axis crossing or `u_max`.
#[derive(Debug, Clone, Serialize)]
pub struct ManifoldTrace {
    lambda: f64,
    alpha: f64,
    x1: f64,
    mu_plus: f64,
    seed_offset: f64,
    u_max: f64,
    u_samples: Vec<f64>,
    phi_samples: Vec<f64>,
    /// Axis crossing `u_bar`, if one occurs before `u_max`.
    u_crossing: Option<f64>,
    /// `u_bar + x1`, the crossing in original coordinates.
    x_bar: Option<f64>,
}

impl ManifoldTrace {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Saddle abscissa the transformation is anchored at.
    pub fn x1(&self) -> f64 {
        self.x1
    }

    /// Tangent slope of the branch at the saddle.
    pub fn mu_plus(&self) -> f64 {
        self.mu_plus
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Axis crossing `u_bar` in transformed coordinates, if any.
    pub fn u_crossing(&self) -> Option<f64> {
        self.u_crossing
    }

    /// Axis crossing in original coordinates, `x_bar = u_bar + x1`.
    pub fn x_bar(&self) -> Option<f64> {
        self.x_bar
    }

    /// Largest abscissa covered by the trace: `u_bar` if the branch crossed,
    /// otherwise `u_max`.
    pub fn u_end(&self) -> f64 {
        *self.u_samples.last().expect("trace is never empty")
    }

    /// Graph samples `(u, Phi(u))` in increasing `u`, starting at `(0, 0)`.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.u_samples.iter().copied().zip(self.phi_samples.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.u_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The branch mapped back to original phase-space coordinates,
    /// `(x, y) = (u + x1, -Phi(u))`: the half of the separatrix that
    /// approaches the saddle from `y < 0`.
    pub fn original_coords(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples().map(move |(u, phi)| (u + self.x1, -phi))
    }

    /// Evaluate `Phi(u)` by monotone piecewise-cubic interpolation of the
    /// recorded samples, using the analytic graph slope at the nodes and the
    /// exact tangent `mu_plus` at the saddle.
    pub fn phi_at(&self, u: f64) -> Result<f64> {
        let end = self.u_end();
        if !u.is_finite() || u < 0.0 || u > end * (1.0 + 1e-12) {
            return Err(Error::InvalidInput(format!(
                "u = {u} outside the traced range [0, {end}]"
            )));
        }
        let u = u.min(end);
        // Index of the interval [u_k, u_{k+1}] containing u.
        let k = match self.u_samples.binary_search_by(|a| a.partial_cmp(&u).unwrap()) {
            Ok(i) => return Ok(self.phi_samples[i]),
            Err(i) => i - 1,
        };
        let (u0, u1) = (self.u_samples[k], self.u_samples[k + 1]);
        let (p0, p1) = (self.phi_samples[k], self.phi_samples[k + 1]);
        let h = u1 - u0;
        let m0 = self.node_slope(k);
        let m1 = self.node_slope(k + 1);
        let t = (u - u0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        Ok(p0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * h * (t3 - 2.0 * t2 + t)
            + p1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * h * (t3 - t2))
    }

    fn node_slope(&self, k: usize) -> f64 {
        let u = self.u_samples[k];
        let phi = self.phi_samples[k];
        if k == 0 {
            return self.mu_plus;
        }
        if phi >= SLOPE_FLOOR {
            if let Ok(f) = model::force(u + self.x1, self.lambda) {
                return self.alpha - f / phi;
            }
        }
        // Secant fallback, used at the crossing endpoint.
        let j = if k + 1 < self.u_samples.len() { k + 1 } else { k - 1 };
        (self.phi_samples[j] - phi) / (self.u_samples[j] - u)
    }
}

/// Default trace extent: generously past both equilibria, so a missing
/// crossing within it is a reliable stable-side signal.
pub fn default_u_max(lambda: f64) -> Result<f64> {
    match steady::equilibria(lambda)? {
        Equilibria::Pair { x1, x2 } => Ok(10.0 * (x2 - x1) + 5.0),
        _ => Err(Error::NoSaddle { lambda }),
    }
}

/// Trace the saddle's stable-manifold branch up to `u_max` past the saddle.
pub fn trace_stable_manifold(params: &Params, u_max: f64) -> Result<ManifoldTrace> {
    trace_with_seed(params, u_max, SEED_OFFSET)
}

/// As `trace_stable_manifold`, with an explicit tangent-line seed offset
/// (exposed for convergence studies of the seeding error).
pub(crate) fn trace_with_seed(params: &Params, u_max: f64, delta: f64) -> Result<ManifoldTrace> {
    if !(u_max.is_finite() && u_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "u_max must be positive and finite, got {u_max}"
        )));
    }
    if !(delta.is_finite() && delta > 0.0 && delta <= 1e-3) {
        return Err(Error::InvalidInput(format!(
            "seed offset must lie in (0, 1e-3], got {delta}"
        )));
    }
    let lambda = params.lambda();
    let alpha = params.alpha();
    let x1 = match steady::equilibria(lambda)? {
        Equilibria::Pair { x1, .. } => x1,
        _ => return Err(Error::NoSaddle { lambda }),
    };
    let fx1 = model::dforce_dx(x1, lambda)?;
    let half = 0.5 * alpha;
    let mu_plus = half + (half * half - fx1).sqrt();

    let mut us = vec![0.0];
    let mut phis = vec![0.0];
    let record = |us: &mut Vec<f64>, phis: &mut Vec<f64>, u: f64, phi: f64| {
        let last = *us.last().unwrap();
        if u > last + 1e-14 * u.abs().max(1.0) {
            us.push(u);
            phis.push(phi);
        }
    };

    let seed_u = delta.min(0.5 * u_max);
    let seed_phi = mu_plus * seed_u;
    record(&mut us, &mut phis, seed_u, seed_phi);

    // Phase A: the graph ODE in u, valid while Phi stays clear of the axis.
    let graph_rhs = move |u: f64, w: &[f64; 1]| -> Option<[f64; 1]> {
        if w[0] <= 0.0 {
            return None;
        }
        let f = model::force(u + x1, lambda).ok()?;
        Some([alpha - f / w[0]])
    };
    let needs_switch = |u: f64, phi: f64| -> bool {
        phi <= SWITCH_LEVEL && model::force(u + x1, lambda).map_or(true, |f| f > 0.0)
    };

    let mut handover = None;
    if needs_switch(seed_u, seed_phi) {
        handover = Some((seed_u, seed_phi));
    } else {
        let mut st = Stepper::new(graph_rhs, 1e-10, 1e-14, seed_u, [seed_phi], seed_u)
            .expect("seed is inside the graph domain");
        loop {
            if st.accepted() + st.rejected() >= MAX_STEPS {
                return Err(Error::InvalidInput(format!(
                    "manifold trace exceeded {MAX_STEPS} steps in the graph phase \
                     (lambda = {lambda}, alpha = {alpha})"
                )));
            }
            let remaining = u_max - st.t();
            if remaining <= 1e-9 * u_max.max(1.0) {
                break;
            }
            match st.advance(remaining.min(RECORD_DU)) {
                Ok(_) => {}
                // The graph slope blew up between the switch level and the
                // axis; hand the current point to the planar phase.
                Err(StepError::Underflow { .. }) => {
                    handover = Some((st.t(), st.y()[0]));
                    break;
                }
            }
            let (u, phi) = (st.t(), st.y()[0]);
            record(&mut us, &mut phis, u, phi);
            if needs_switch(u, phi) {
                handover = Some((u, phi));
                break;
            }
        }
    }

    // Phase B: the planar system at unit speed, through the axis crossing.
    let mut u_crossing = None;
    if let Some((u0, v0)) = handover {
        let planar_rhs = move |_s: f64, w: &[f64; 2]| -> Option<[f64; 2]> {
            let f = model::force(w[0] + x1, lambda).ok()?;
            let du = w[1];
            let dv = alpha * w[1] - f;
            let n = du.hypot(dv);
            if n == 0.0 {
                return None;
            }
            Some([du / n, dv / n])
        };
        let mut st = Stepper::new(planar_rhs, 1e-10, 1e-12, 0.0, [u0, v0], 1e-3)
            .expect("handover point is inside the domain");
        let s_max = 6.0 * (u_max + 1.0);
        loop {
            if st.accepted() + st.rejected() >= MAX_STEPS || st.t() >= s_max {
                // No axis crossing within a generous arclength budget:
                // report the branch as not crossing.
                break;
            }
            let step = match st.advance(RECORD_DS) {
                Ok(s) => s,
                Err(StepError::Underflow { .. }) => break,
            };
            let [u, v] = *st.y();
            if v <= 0.0 {
                // Crossing inside this step: bisect the dense output for
                // v = 0. Unit speed makes the s-tolerance a u-tolerance.
                let mut lo = step.t0;
                let mut hi = step.t1();
                while hi - lo > 1e-10 {
                    let mid = 0.5 * (lo + hi);
                    if step.eval(mid)[1] > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let ub = step.eval(0.5 * (lo + hi))[0];
                record(&mut us, &mut phis, ub, 0.0);
                u_crossing = Some(ub);
                break;
            }
            if u >= u_max {
                // Ran past the requested extent while still above the axis:
                // clip the final sample to u_max (u is monotone while v > 0).
                let mut lo = step.t0;
                let mut hi = step.t1();
                while hi - lo > 1e-10 {
                    let mid = 0.5 * (lo + hi);
                    if step.eval(mid)[0] < u_max {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let w = step.eval(0.5 * (lo + hi));
                record(&mut us, &mut phis, w[0], w[1]);
                break;
            }
            record(&mut us, &mut phis, u, v);
        }
    }

    Ok(ManifoldTrace {
        lambda,
        alpha,
        x1,
        mu_plus,
        seed_offset: delta,
        u_max,
        u_samples: us,
        phi_samples: phis,
        x_bar: u_crossing.map(|ub| ub + x1),
        u_crossing,
    })
}

/// The crossing of the manifold with the axis in original coordinates, if
/// it occurs within the default trace extent.
pub fn crossing_x_bar(params: &Params) -> Result<Option<f64>> {
    let u_max = default_u_max(params.lambda())?;
    Ok(trace_stable_manifold(params, u_max)?.x_bar())
}

/// Check the lower bound `Phi(u) >= alpha u` on `[0, x2 - x1]`.
pub fn lemma1_bound_check(params: &Params) -> Result<bool> {
    let lambda = params.lambda();
    let (x1, x2) = match steady::equilibria(lambda)? {
        Equilibria::Pair { x1, x2 } => (x1, x2),
        _ => return Err(Error::NoSaddle { lambda }),
    };
    let trace = trace_stable_manifold(params, default_u_max(lambda)?)?;
    let span = x2 - x1;
    let n = 256;
    for k in 0..=n {
        let u = span * k as f64 / n as f64;
        let phi = trace.phi_at(u)?;
        if phi < params.alpha() * u - 1e-9 * (1.0 + u) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check that `Phi` is strictly increasing in `alpha` on the common traced
/// domain, for the given strictly ascending damping values.
pub fn monotonicity_check(lambda: f64, alphas: &[f64]) -> Result<bool> {
    if alphas.len() < 2 {
        return Err(Error::InvalidInput(
            "monotonicity check needs at least two damping values".into(),
        ));
    }
    if alphas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(
            "damping values must be strictly ascending".into(),
        ));
    }
    let u_max = default_u_max(lambda)?;
    let traces: Vec<ManifoldTrace> = alphas
        .iter()
        .map(|&a| trace_stable_manifold(&Params::new(lambda, a)?, u_max))
        .collect::<Result<_>>()?;
    for pair in traces.windows(2) {
        let u_hi = pair[0].u_end().min(pair[1].u_end()) * (1.0 - 1e-9);
        let n = 128;
        for k in 1..=n {
            // Skip the seeding neighborhood; the tangent slopes already
            // order the branches there.
            let u = 1e-3 * u_hi + (u_hi - 1e-3 * u_hi) * k as f64 / n as f64;
            if pair[1].phi_at(u)? <= pair[0].phi_at(u)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::potential;

    /// Conservative closed form: Phi(u)^2 = 2 (F(x1) - F(u + x1)).
    fn phi_closed(lambda: f64, x1: f64, u: f64) -> f64 {
        let k = potential(x1, lambda).unwrap() - potential(u + x1, lambda).unwrap();
        (2.0 * k.max(0.0)).sqrt()
    }

    /// Root of F(x) = F(x1) to the right of x2, by bisection.
    fn x_bar_closed(lambda: f64) -> f64 {
        let (x1, x2) = steady::equilibria(lambda).unwrap().pair().unwrap();
        let target = potential(x1, lambda).unwrap();
        let (mut lo, mut hi) = (x2, 5.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if potential(mid, lambda).unwrap() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn conservative_branch_matches_closed_form() {
        for lambda in [0.10, 0.13] {
            let p = Params::conservative(lambda).unwrap();
            let trace = trace_stable_manifold(&p, default_u_max(lambda).unwrap()).unwrap();
            let x1 = trace.x1();
            let u_hi = 0.9 * trace.u_end();
            for k in 1..=40 {
                let u = u_hi * k as f64 / 40.0;
                let want = phi_closed(lambda, x1, u);
                assert!(
                    (trace.phi_at(u).unwrap() - want).abs() <= 1e-7 * (1.0 + want),
                    "lambda = {lambda}, u = {u}"
                );
            }
        }
    }

    #[test]
    fn conservative_crossing_matches_level_set() {
        // Above 1/8 the crossing sits left of the origin, below it to the
        // right; both must agree with the potential level set.
        for (lambda, sign_neg) in [(0.13, true), (0.10, false)] {
            let p = Params::conservative(lambda).unwrap();
            let xb = crossing_x_bar(&p).unwrap().expect("crossing exists");
            assert_eq!(xb < 0.0, sign_neg, "lambda = {lambda}");
            assert!(
                (xb - x_bar_closed(lambda)).abs() <= 1e-8,
                "lambda = {lambda}: {xb} vs {}",
                x_bar_closed(lambda)
            );
        }
    }

    #[test]
    fn tangent_slope_at_saddle() {
        let p = Params::new(0.13, 0.7).unwrap();
        let trace = trace_stable_manifold(&p, 1.0).unwrap();
        let u = 1e-4;
        let slope = trace.phi_at(u).unwrap() / u;
        assert!((slope - trace.mu_plus()).abs() <= 1e-3 * trace.mu_plus());
        let mu = trace.mu_plus();
        let fx1 = model::dforce_dx(trace.x1(), 0.13).unwrap();
        // mu_plus solves mu^2 - alpha mu + f_x(x1) = 0.
        assert!((mu * mu - 0.7 * mu + fx1).abs() <= 1e-12);
    }

    #[test]
    fn interpolant_satisfies_graph_ode() {
        let p = Params::new(0.135, 0.3).unwrap();
        let trace = trace_stable_manifold(&p, default_u_max(0.135).unwrap()).unwrap();
        let u_end = trace.u_end();
        for k in 1..20 {
            let u = 0.15 * u_end + 0.6 * u_end * k as f64 / 20.0;
            let h = 1e-5;
            let fd = (trace.phi_at(u + h).unwrap() - trace.phi_at(u - h).unwrap()) / (2.0 * h);
            let phi = trace.phi_at(u).unwrap();
            let want = 0.3 - model::force(u + trace.x1(), 0.135).unwrap() / phi;
            assert!(
                (fd - want).abs() <= 1e-4 * (1.0 + want.abs()),
                "u = {u}: {fd} vs {want}"
            );
        }
    }

    #[test]
    fn lemma1_lower_bound_holds() {
        for (lambda, alpha) in [(0.13, 0.2), (0.13, 1.0), (0.145, 0.4)] {
            let p = Params::new(lambda, alpha).unwrap();
            assert!(
                lemma1_bound_check(&p).unwrap(),
                "lambda = {lambda}, alpha = {alpha}"
            );
        }
    }

    #[test]
    fn crossing_pattern_in_alpha() {
        // Small damping keeps the crossing; large damping removes it, and in
        // between the crossing abscissa grows with alpha.
        let lambda = 0.14;
        let xb0 = crossing_x_bar(&Params::conservative(lambda).unwrap()).unwrap();
        let xb1 = crossing_x_bar(&Params::new(lambda, 0.5).unwrap()).unwrap();
        let (Some(a), Some(b)) = (xb0, xb1) else {
            panic!("crossings must exist at alpha = 0 and 0.5");
        };
        assert!(a < 0.0, "above 1/8 the conservative crossing is left of 0");
        assert!(b > a, "crossing moves right with damping");
        let xb_big = crossing_x_bar(&Params::new(lambda, 6.0).unwrap()).unwrap();
        assert!(
            xb_big.is_none() || xb_big.unwrap() > 0.0,
            "heavy damping is on the stable side"
        );
    }

    #[test]
    fn branch_orders_with_damping() {
        assert!(monotonicity_check(0.14, &[0.0, 0.3, 0.8]).unwrap());
        assert!(matches!(
            monotonicity_check(0.14, &[0.5]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            monotonicity_check(0.14, &[0.5, 0.2]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn seeding_error_is_negligible() {
        let p = Params::new(0.13, 0.5).unwrap();
        let u_max = default_u_max(0.13).unwrap();
        let xb = |d: f64| {
            trace_with_seed(&p, u_max, d)
                .unwrap()
                .x_bar()
                .expect("crossing exists")
        };
        let coarse = (xb(1e-4) - xb(1e-6)).abs();
        let fine = (xb(1e-5) - xb(1e-6)).abs();
        assert!(coarse <= 1e-6, "coarse seed error {coarse}");
        assert!(fine <= coarse + 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = Params::new(0.13, 0.5).unwrap();
        assert!(matches!(
            trace_stable_manifold(&p, -1.0),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            trace_stable_manifold(&Params::new(0.2, 0.5).unwrap(), 1.0),
            Err(Error::NoSaddle { .. })
        ));
        let trace = trace_stable_manifold(&p, 1.0).unwrap();
        assert!(trace.phi_at(-0.1).is_err());
        assert!(trace.phi_at(trace.u_end() * 1.1).is_err());
    }

    #[test]
    fn original_coords_anchor_at_saddle() {
        let p = Params::new(0.13, 0.5).unwrap();
        let trace = trace_stable_manifold(&p, 1.0).unwrap();
        let (x0, y0) = trace.original_coords().next().unwrap();
        assert_eq!(x0, trace.x1());
        assert_eq!(y0, 0.0);
        for (x, y) in trace.original_coords() {
            assert!(x >= trace.x1() && y <= 0.0);
        }
    }
}
