//! Trajectory integration with touchdown event location, regime
//! classification, and the conservative-case analysis.
//!
//! The parameter plane splits into three regimes for the orbit started from
//! rest at the origin: convergence to the stable equilibrium (stable
//! operation), convergence to the saddle (the critical, measure-zero case),
//! and finite-time touchdown. Classification never extrapolates:
//!
//! * **Stable** is certified by an energy trap. Once `E < F(x1, lambda)`
//!   with `x > x1`, the orbit can never reach the saddle energy level again
//!   (energy is nonincreasing), so it is confined to the potential well of
//!   `x2` for all time. In the conservative case the same certificate proves
//!   permanent confinement (the orbit is periodic); it is reported as
//!   `ConvergedStable` there too, which is what makes the `alpha = 0`
//!   periodic-vs-touchdown dichotomy a special case of the same machinery.
//! * **Touchdown** is an event located on the integrator's dense output at
//!   the surface `x = -1 + touchdown_gap`, to 1e-10 in `t`.
//! * **Saddle convergence** is reported within tolerance only: a dwell of
//!   `T_DWELL` time units inside a radius-`TOL_SADDLE` ball around
//!   `(x1, 0)` without the trap having fired.
//!
//! Anything else (horizon reached, step budget exhausted, step underflow)
//! is `BudgetExhausted`, surfacing near-threshold ambiguity instead of
//! guessing a side.

use serde::Serialize;

use crate::model::{self, energy_xy, potential, Params, PhaseState};
use crate::rk45::{StepError, Stepper};
use crate::steady::{self, Equilibria};
use crate::{Error, Result};

/// Saddle-convergence ball radius (the critical set can only be reported
/// within tolerance).
pub const TOL_SADDLE: f64 = 1e-6;

/// Dwell time inside the saddle ball required for `ConvergedSaddle`.
pub const T_DWELL: f64 = 50.0;

/// Margin below the saddle potential required by the energy trap.
const TRAP_MARGIN: f64 = 1e-12;

/// Budget reason reported when the horizon ends integration without any
/// classification criterion having fired.
const HORIZON_REASON: &str = "t_max reached without classification";

/// Adaptive-integration controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationOptions {
    /// Relative error tolerance of the embedded pair.
    pub rtol: f64,
    /// Absolute error tolerance of the embedded pair.
    pub atol: f64,
    /// Integration horizon, measured from the initial time.
    pub t_max: f64,
    /// Cap on attempted (accepted plus rejected) steps.
    pub max_steps: u64,
    /// Touchdown is declared at the surface `x = -1 + touchdown_gap`.
    pub touchdown_gap: f64,
    /// Record samples every this many time units on the dense output;
    /// `None` records every accepted step endpoint.
    pub sample_every: Option<f64>,
}

impl Default for IntegrationOptions {
    /// Defaults resolve the metastable saddle dwell at thresholds down to
    /// the 1e-6 bisection tolerance used by the pull-in curve.
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            t_max: 2000.0,
            max_steps: 5_000_000,
            touchdown_gap: 1e-6,
            sample_every: None,
        }
    }
}

/// Terminal classification of a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Outcome {
    /// Energy-trapped in the potential well of `x2`: stable operation.
    ConvergedStable { x2: f64 },
    /// Dwelled within tolerance of the saddle: the critical regime.
    ConvergedSaddle { x1: f64 },
    /// Finite-time touchdown at `t_td` (located at the gap surface).
    Touchdown { t_td: f64 },
    /// No criterion fired within the configured budget.
    BudgetExhausted { reason: String },
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::ConvergedStable { .. } => "stable",
            Outcome::ConvergedSaddle { .. } => "saddle",
            Outcome::Touchdown { .. } => "touchdown",
            Outcome::BudgetExhausted { .. } => "budget-exhausted",
        }
    }

    pub fn is_touchdown(&self) -> bool {
        matches!(self, Outcome::Touchdown { .. })
    }

    /// True when the budget that ran out was simply the time horizon.
    pub fn is_horizon(&self) -> bool {
        matches!(self, Outcome::BudgetExhausted { reason } if reason == HORIZON_REASON)
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::ConvergedStable { x2 } => write!(f, "stable (trapped in the well of x2 = {x2})"),
            Outcome::ConvergedSaddle { x1 } => write!(f, "saddle (dwelled at x1 = {x1})"),
            Outcome::Touchdown { t_td } => write!(f, "touchdown at t = {t_td}"),
            Outcome::BudgetExhausted { reason } => write!(f, "budget exhausted: {reason}"),
        }
    }
}

/// Integration statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryStats {
    pub steps: u64,
    pub rejected_steps: u64,
    /// Minimum electrode gap `1 + x` over the recorded samples.
    pub min_gap: f64,
}

/// An adaptively sampled orbit plus its terminal outcome.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub samples: Vec<PhaseState>,
    pub outcome: Outcome,
    pub stats: TrajectoryStats,
}

enum Mode {
    /// Run to the horizon, label the outcome at the end.
    Trace,
    /// Stop as soon as a classification criterion fires.
    Classify,
}

/// Integrate from `initial` until touchdown, classification (in classify
/// mode), the horizon, or budget exhaustion.
///
/// `opts.t_max` is measured from `initial.t()`. The outcome at the horizon
/// is labeled with the same criteria `classify` uses for early exit.
pub fn integrate(params: &Params, initial: PhaseState, opts: &IntegrationOptions) -> Trajectory {
    run(params, initial, opts, Mode::Trace)
}

/// Classify the orbit from rest at the origin into the three regimes.
pub fn classify(params: &Params, opts: &IntegrationOptions) -> Outcome {
    run(params, PhaseState::origin(), opts, Mode::Classify).outcome
}

fn run(params: &Params, initial: PhaseState, opts: &IntegrationOptions, mode: Mode) -> Trajectory {
    let lambda = params.lambda();
    let alpha = params.alpha();
    let surface = -1.0 + opts.touchdown_gap.max(10.0 * model::GAP_GUARD);

    // Saddle data for the trap and dwell criteria. The trap needs the pair;
    // at the degenerate fold only the dwell criterion applies.
    let (saddle, well) = match steady::equilibria(lambda) {
        Ok(Equilibria::Pair { x1, x2 }) => {
            (Some(x1), Some((x2, potential(x1, lambda).expect("x1 > -1"))))
        }
        Ok(Equilibria::Degenerate { x }) => (Some(x), None),
        _ => (None, None),
    };

    let mut samples = vec![initial];
    let mut min_gap = 1.0 + initial.x();
    let zero_stats = TrajectoryStats { steps: 0, rejected_steps: 0, min_gap };

    if initial.x() <= surface {
        return Trajectory {
            samples,
            outcome: Outcome::Touchdown { t_td: initial.t() },
            stats: zero_stats,
        };
    }

    let rhs = move |_t: f64, w: &[f64; 2]| -> Option<[f64; 2]> {
        if !w[1].is_finite() {
            return None;
        }
        let f = model::force(w[0], lambda).ok()?;
        Some([w[1], -(alpha * w[1] + f)])
    };

    let t0 = initial.t();
    let t_end = t0 + opts.t_max;
    let mut stepper = Stepper::new(rhs, opts.rtol, opts.atol, t0, [initial.x(), initial.y()], 1e-3)
        .expect("initial state is inside the domain");

    let mut next_sample = opts.sample_every.map(|d| t0 + d);
    let mut trap_fired = false;
    let mut ball_since: Option<f64> = None;

    let push = |samples: &mut Vec<PhaseState>, min_gap: &mut f64, t: f64, x: f64, y: f64| {
        if let Some(last) = samples.last() {
            if t - last.t() <= 1e-12 * t.abs().max(1.0) {
                return;
            }
        }
        let s = PhaseState::new(t, x, y).expect("sample inside the domain");
        *min_gap = min_gap.min(1.0 + x);
        samples.push(s);
    };

    // Evaluate the classification criteria at a state; `None` means nothing
    // fired yet.
    let check = |trap_fired: &mut bool, ball_since: &mut Option<f64>, t: f64, x: f64, y: f64| {
        if let (Some(x1), Some((_, trap_level))) = (saddle, well) {
            if !*trap_fired && x > x1 {
                if let Ok(e) = energy_xy(x, y, lambda) {
                    if e < trap_level - TRAP_MARGIN {
                        *trap_fired = true;
                    }
                }
            }
        }
        if let Some(x1) = saddle {
            let dx = x - x1;
            if dx * dx + y * y <= TOL_SADDLE * TOL_SADDLE {
                let since = *ball_since.get_or_insert(t);
                if t - since >= T_DWELL {
                    return Some(Outcome::ConvergedSaddle { x1 });
                }
            } else {
                *ball_since = None;
            }
        }
        if *trap_fired {
            if let Some((x2, _)) = well {
                return Some(Outcome::ConvergedStable { x2 });
            }
        }
        None
    };

    // The initial state may already satisfy a criterion (e.g. the trap fires
    // at t = 0 for small loads).
    let fired_at_start = check(&mut trap_fired, &mut ball_since, t0, initial.x(), initial.y());
    if matches!(mode, Mode::Classify) {
        if let Some(outcome) = fired_at_start {
            return Trajectory { samples, outcome, stats: zero_stats };
        }
    }

    let outcome = loop {
        if stepper.accepted() + stepper.rejected() >= opts.max_steps {
            break Outcome::BudgetExhausted {
                reason: format!(
                    "step budget {} exhausted at t = {}",
                    opts.max_steps,
                    stepper.t()
                ),
            };
        }
        let remaining = t_end - stepper.t();
        if remaining <= 1e-12 * t_end.abs().max(1.0) {
            break horizon_outcome(trap_fired, ball_since, stepper.t(), saddle, well);
        }

        let x = stepper.y()[0];
        let mut h_cap = remaining;
        if x < -0.9 {
            // Keep trial steps from overshooting the pole between accepted
            // steps, so the event bisection always has a valid bracket.
            h_cap = h_cap.min(0.1 * (1.0 + x));
        }

        let step = match stepper.advance(h_cap) {
            Ok(s) => s,
            Err(StepError::Underflow { t }) => {
                break Outcome::BudgetExhausted {
                    reason: format!("step size underflow at t = {t}"),
                }
            }
        };
        let t1 = stepper.t();
        let [x1s, y1s] = *stepper.y();

        if x1s <= surface {
            // Touchdown: locate the crossing time on the dense output.
            let mut lo = step.t0;
            let mut hi = step.t1();
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if step.eval(mid)[0] > surface {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t_td = hi;
            if let Some(d) = opts.sample_every {
                while let Some(ts) = next_sample {
                    if ts >= t_td {
                        break;
                    }
                    let w = step.eval(ts);
                    push(&mut samples, &mut min_gap, ts, w[0], w[1]);
                    next_sample = Some(ts + d);
                }
            }
            let w = step.eval(t_td);
            push(&mut samples, &mut min_gap, t_td, w[0], w[1]);
            break Outcome::Touchdown { t_td };
        }

        match opts.sample_every {
            Some(d) => {
                while let Some(ts) = next_sample {
                    if ts > t1 {
                        break;
                    }
                    let w = step.eval(ts);
                    push(&mut samples, &mut min_gap, ts, w[0], w[1]);
                    next_sample = Some(ts + d);
                }
            }
            None => push(&mut samples, &mut min_gap, t1, x1s, y1s),
        }

        // In Trace mode a fired criterion only labels the terminal outcome;
        // the orbit is still traced to the horizon.
        if let Some(outcome) = check(&mut trap_fired, &mut ball_since, t1, x1s, y1s) {
            if matches!(mode, Mode::Classify) {
                break outcome;
            }
        }
    };

    // Make sure the final integrator state is recorded.
    if !matches!(outcome, Outcome::Touchdown { .. }) {
        let [xf, yf] = *stepper.y();
        if xf > -1.0 + model::GAP_GUARD {
            push(&mut samples, &mut min_gap, stepper.t(), xf, yf);
        }
    }

    Trajectory {
        samples,
        outcome,
        stats: TrajectoryStats {
            steps: stepper.accepted(),
            rejected_steps: stepper.rejected(),
            min_gap,
        },
    }
}

fn horizon_outcome(
    trap_fired: bool,
    ball_since: Option<f64>,
    t_now: f64,
    saddle: Option<f64>,
    well: Option<(f64, f64)>,
) -> Outcome {
    if trap_fired {
        if let Some((x2, _)) = well {
            return Outcome::ConvergedStable { x2 };
        }
    }
    if let (Some(x1), Some(since)) = (saddle, ball_since) {
        if t_now - since >= T_DWELL {
            return Outcome::ConvergedSaddle { x1 };
        }
    }
    Outcome::BudgetExhausted { reason: HORIZON_REASON.to_string() }
}

/// Check positive invariance of `U = {x^2 + y^2 < 1/16, E <= -lambda}` for
/// small loads: every sampled start in `U` must stay in `U` (up to `t = 50`)
/// and classify as stable.
///
/// Starts are drawn from a deterministic golden-angle disk sequence filtered
/// by the energy condition, then thinned to `n_samples` points spread across
/// the admissible region.
///
/// # Panics
/// If `lambda` is not in `(0, 1/32)`, `alpha` is not positive, or
/// `n_samples` is zero.
pub fn prop2_invariant_check(lambda: f64, alpha: f64, n_samples: usize) -> bool {
    assert!(
        lambda > 0.0 && lambda < 1.0 / 32.0,
        "prop2 region requires 0 < lambda < 1/32"
    );
    assert!(alpha > 0.0, "prop2 region requires alpha > 0");
    assert!(n_samples > 0);

    const GOLDEN_ANGLE: f64 = 2.399963229728653;
    // To leading order in lambda, U is the disk of radius lambda centered at
    // (-lambda, 0); covering it with a disk of twice the radius keeps the
    // acceptance rate of the rejection sampler near 1/4 at every load.
    let radius = 2.0 * lambda;
    let cap = 64 * n_samples;
    let in_u = |x: f64, y: f64| -> bool {
        x * x + y * y < 1.0 / 16.0 && energy_xy(x, y, lambda).is_ok_and(|e| e <= -lambda)
    };
    let candidates: Vec<(f64, f64)> = (0..cap)
        .map(|i| {
            let r = radius * (((i as f64) + 0.5) / cap as f64).sqrt();
            let th = GOLDEN_ANGLE * i as f64;
            (-lambda + r * th.cos(), r * th.sin())
        })
        .filter(|&(x, y)| in_u(x, y))
        .collect();
    assert!(
        candidates.len() >= n_samples,
        "golden-angle sequence produced too few points in U"
    );

    let params = Params::new(lambda, alpha).expect("validated above");
    let opts = IntegrationOptions {
        t_max: 50.0,
        sample_every: Some(0.05),
        ..IntegrationOptions::default()
    };
    let stride = candidates.len() as f64 / n_samples as f64;
    for k in 0..n_samples {
        let (x0, y0) = candidates[(k as f64 * stride) as usize];
        let start = PhaseState::new(0.0, x0, y0).expect("U is inside the domain");
        let traj = integrate(&params, start, &opts);
        if !matches!(traj.outcome, Outcome::ConvergedStable { .. }) {
            return false;
        }
        for s in &traj.samples {
            let d = s.x() * s.x() + s.y() * s.y();
            let e = energy_xy(s.x(), s.y(), lambda).expect("sample in domain");
            if d >= 1.0 / 16.0 + 1e-9 || e > -lambda + 1e-9 {
                return false;
            }
        }
    }
    true
}

/// Sample the conservative level set `E = e0` on `x_grid`:
/// `y = +-sqrt(2 (e0 - F(x, lambda)))` where the radicand is nonnegative.
///
/// Returned as the upper branch in grid order followed by the mirrored lower
/// branch, i.e. a plot-ready closed curve. Grid points where the level set
/// is absent (or past the pole) contribute nothing; the result is empty if
/// the level set misses the grid entirely.
pub fn conservative_orbit(lambda: f64, e0: f64, x_grid: &[f64]) -> Vec<(f64, f64)> {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for &x in x_grid {
        let Ok(fv) = potential(x, lambda) else { continue };
        let k = e0 - fv;
        if k >= 0.0 {
            let y = (2.0 * k).sqrt();
            upper.push((x, y));
            if y != 0.0 {
                lower.push((x, -y));
            }
        }
    }
    lower.reverse();
    upper.extend(lower);
    upper
}

/// The landmark `phi(lambda) = F(x1(lambda), lambda) + lambda`, the saddle
/// potential relative to the origin's energy.
///
/// Positive for small loads (the origin sits strictly inside the homoclinic
/// loop), zero exactly at the conservative dynamic pull-in value, and
/// `-1/54` at the fold.
pub fn phi(lambda: f64) -> Result<f64> {
    match steady::equilibria(lambda)? {
        Equilibria::Pair { x1, .. } => Ok(potential(x1, lambda)? + lambda),
        Equilibria::Degenerate { x } => Ok(potential(x, lambda)? + lambda),
        Equilibria::None => Err(Error::NoEquilibria { lambda }),
    }
}

/// The conservative dynamic pull-in value `lambda_d(0) = 1/8`, computed by
/// bisecting `phi` on `(1e-6, 4/27)` to an interval of width 1e-12.
pub fn lambda_d_conservative() -> f64 {
    let mut lo = 1e-6; // phi(lo) > 0
    let mut hi = 4.0 / 27.0; // phi(hi) = -1/54 < 0
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if phi(mid).expect("bracket stays inside (0, 4/27]") > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Durations of the three phases of a touchdown orbit relative to a ball
/// around the saddle: approach, metastable dwell, collapse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidenceProfile {
    pub saddle_radius: f64,
    /// From the start to the first entry into the ball.
    pub t_approach: f64,
    /// From first entry to final exit.
    pub t_dwell: f64,
    /// From final exit to touchdown.
    pub t_collapse: f64,
    pub t_touchdown: f64,
}

/// Partition the touchdown orbit from the origin into approach, dwell, and
/// collapse phases relative to the ball of `saddle_radius` around
/// `(x1(lambda), 0)`.
///
/// Errors when no saddle exists, when the orbit does not touch down, or when
/// it never enters the ball.
pub fn residence_profile(params: &Params, saddle_radius: f64) -> Result<ResidenceProfile> {
    if !(saddle_radius.is_finite() && saddle_radius > 0.0) {
        return Err(Error::InvalidInput(format!(
            "saddle radius must be positive, got {saddle_radius}"
        )));
    }
    let lambda = params.lambda();
    let x1 = match steady::equilibria(lambda)? {
        Equilibria::Pair { x1, .. } => x1,
        Equilibria::Degenerate { .. } | Equilibria::None => {
            return Err(Error::NoSaddle { lambda })
        }
    };
    let opts = IntegrationOptions {
        sample_every: Some(0.01),
        ..IntegrationOptions::default()
    };
    let traj = integrate(params, PhaseState::origin(), &opts);
    let Outcome::Touchdown { t_td } = traj.outcome else {
        return Err(Error::NotTouchdown { outcome: traj.outcome.to_string() });
    };

    let r2 = saddle_radius * saddle_radius;
    let mut t_enter = None;
    let mut t_exit = None;
    for s in &traj.samples {
        let dx = s.x() - x1;
        if dx * dx + s.y() * s.y() <= r2 {
            t_enter.get_or_insert(s.t());
            t_exit = Some(s.t());
        }
    }
    let (Some(te), Some(tx)) = (t_enter, t_exit) else {
        return Err(Error::SaddleBallMiss { radius: saddle_radius });
    };
    Ok(ResidenceProfile {
        saddle_radius,
        t_approach: te - traj.samples[0].t(),
        t_dwell: tx - te,
        t_collapse: t_td - tx,
        t_touchdown: t_td,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::energy;

    fn assert_trajectory_invariants(traj: &Trajectory) {
        for win in traj.samples.windows(2) {
            assert!(win[1].t() > win[0].t(), "samples strictly increasing in t");
        }
        for s in &traj.samples {
            assert!(s.x() > -1.0);
        }
        if let Outcome::Touchdown { t_td } = traj.outcome {
            assert!(t_td >= traj.samples.last().unwrap().t());
        }
    }

    #[test]
    fn equilibrium_start_stays_put() {
        let lambda = 0.1;
        let x2 = steady::equilibria(lambda).unwrap().stable().unwrap();
        let p = Params::new(lambda, 0.5).unwrap();
        let opts = IntegrationOptions { t_max: 10.0, ..Default::default() };
        let traj = integrate(&p, PhaseState::new(0.0, x2, 0.0).unwrap(), &opts);
        assert_trajectory_invariants(&traj);
        for s in &traj.samples {
            assert!((s.x() - x2).abs() <= 1e-9 && s.y().abs() <= 1e-9);
        }
        assert!(matches!(traj.outcome, Outcome::ConvergedStable { .. }));
    }

    #[test]
    fn touchdown_above_static_pullin() {
        let p = Params::new(0.2, 1.0).unwrap();
        let opts = IntegrationOptions::default();
        let traj = integrate(&p, PhaseState::origin(), &opts);
        assert_trajectory_invariants(&traj);
        let Outcome::Touchdown { t_td } = traj.outcome else {
            panic!("expected touchdown, got {:?}", traj.outcome);
        };
        assert!(t_td > 0.0 && t_td < opts.t_max);
        let last = traj.samples.last().unwrap();
        assert!(1.0 + last.x() <= opts.touchdown_gap * (1.0 + 1e-9));
        assert!(traj.stats.min_gap <= opts.touchdown_gap * (1.0 + 1e-9));
        assert!(traj.stats.steps > 0);
    }

    #[test]
    fn conservative_orbit_conserves_energy() {
        let p = Params::conservative(0.1).unwrap();
        let opts = IntegrationOptions {
            t_max: 20.0,
            sample_every: Some(0.01),
            ..Default::default()
        };
        let traj = integrate(&p, PhaseState::origin(), &opts);
        assert_trajectory_invariants(&traj);
        let e0 = -0.1;
        for s in &traj.samples {
            assert!((energy(s, 0.1).unwrap() - e0).abs() <= 1e-8);
        }
        // Periodic confinement is reported as stable.
        assert!(matches!(traj.outcome, Outcome::ConvergedStable { .. }));
    }

    #[test]
    fn dissipative_energy_nonincreasing() {
        for alpha in [0.5, 2.0] {
            let p = Params::new(0.12, alpha).unwrap();
            let opts = IntegrationOptions {
                t_max: 50.0,
                sample_every: Some(0.1),
                ..Default::default()
            };
            let traj = integrate(&p, PhaseState::origin(), &opts);
            let mut prev = f64::INFINITY;
            for s in &traj.samples {
                let e = energy(s, 0.12).unwrap();
                assert!(e <= prev + 1e-9, "energy must not increase");
                prev = e;
            }
        }
    }

    #[test]
    fn classify_three_regimes() {
        let opts = IntegrationOptions::default();
        assert!(matches!(
            classify(&Params::new(0.03, 1.0).unwrap(), &opts),
            Outcome::ConvergedStable { .. }
        ));
        assert!(classify(&Params::conservative(0.13).unwrap(), &opts).is_touchdown());
        assert!(matches!(
            classify(&Params::new(0.13, 5.0).unwrap(), &opts),
            Outcome::ConvergedStable { .. }
        ));
        assert!(classify(&Params::new(0.2, 0.5).unwrap(), &opts).is_touchdown());
    }

    #[test]
    fn origin_orbit_never_crosses_zero() {
        // The origin-started orbit stays in x <= 0 for lambda < lambda*.
        for (lambda, alpha) in [(0.10, 1.0), (0.13, 0.0), (0.14, 0.5)] {
            let p = Params::new(lambda, alpha).unwrap();
            let opts = IntegrationOptions {
                t_max: 100.0,
                sample_every: Some(0.02),
                ..Default::default()
            };
            let traj = integrate(&p, PhaseState::origin(), &opts);
            for s in &traj.samples {
                assert!(s.x() <= 1e-9, "x stays nonpositive, got {}", s.x());
            }
        }
    }

    #[test]
    fn phi_landmarks() {
        assert!((phi(4.0 / 27.0).unwrap() + 1.0 / 54.0).abs() <= 1e-12);
        assert!(phi(0.125).unwrap().abs() <= 1e-14);
        assert!((phi(1e-6).unwrap() - 0.5).abs() <= 1e-2);
    }

    #[test]
    fn conservative_threshold_anchor() {
        let ld = lambda_d_conservative();
        assert!((ld - 0.125).abs() <= 1e-10);
        let x1 = steady::equilibria(ld).unwrap().saddle().unwrap();
        assert!((x1 + 0.5).abs() <= 1e-9);
    }

    #[test]
    fn level_set_sampling() {
        let lambda = 0.125;
        // The homoclinic level passes through the origin at lambda = 1/8.
        let e0 = potential(-0.5, lambda).unwrap();
        let pts = conservative_orbit(lambda, e0, &[-0.5, -0.25, 0.0]);
        let at_zero: Vec<_> = pts.iter().filter(|(x, _)| *x == 0.0).collect();
        assert_eq!(at_zero.len(), 1);
        assert!(at_zero[0].1.abs() <= 1e-12);
        // Points outside the loop contribute nothing.
        assert!(conservative_orbit(lambda, e0, &[0.5]).is_empty());
        // Energy minimum: the single point (x2, 0).
        let x2 = steady::equilibria(0.1).unwrap().stable().unwrap();
        let only = conservative_orbit(0.1, potential(x2, 0.1).unwrap(), &[-0.5, x2, 0.0]);
        assert_eq!(only, vec![(x2, 0.0)]);
    }

    #[test]
    fn prop2_smoke() {
        assert!(prop2_invariant_check(0.02, 1.0, 25));
    }

    #[test]
    fn residence_requires_touchdown_orbit() {
        // Above the static threshold there is no saddle at all.
        match residence_profile(&Params::new(0.2, 1.0).unwrap(), 0.2) {
            Err(Error::NoSaddle { .. }) => {}
            other => panic!("expected NoSaddle, got {other:?}"),
        }
        // A stable orbit has no touchdown to partition.
        match residence_profile(&Params::new(0.05, 1.0).unwrap(), 0.2) {
            Err(Error::NotTouchdown { .. }) => {}
            other => panic!("expected NotTouchdown, got {other:?}"),
        }
    }

    #[test]
    fn residence_partitions_touchdown() {
        // Touchdown side: the damping threshold at lambda = 0.14 sits near
        // alpha = 0.34, so alpha = 0.25 collapses.
        let p = Params::new(0.14, 0.25).unwrap();
        let prof = residence_profile(&p, 0.2).unwrap();
        assert!(prof.t_approach > 0.0);
        assert!(prof.t_dwell >= 0.0);
        assert!(prof.t_collapse > 0.0);
        let total = prof.t_approach + prof.t_dwell + prof.t_collapse;
        assert!((total - prof.t_touchdown).abs() <= 0.05);
    }
}
