//! Static and dynamic pull-in analysis for a lumped-mass MEMS actuator.
//!
//! The movable electrode of an idealized electrostatic actuator obeys, in
//! dimensionless variables,
//!
//! ```text
//! x'' + alpha x' + x = -lambda / (1 + x)^2
//! ```
//!
//! where `x > -1` is the displacement (`x = -1` is touchdown on the ground
//! plate), `alpha >= 0` the damping and `lambda > 0` the applied-voltage
//! parameter. The library computes the two classical instability thresholds
//! and the phase-plane geometry connecting them:
//!
//! * **Static pull-in** `lambda* = 4/27`: the largest load admitting
//!   stationary solutions ([`steady`]).
//! * **Conservative dynamic pull-in** `lambda_d(0) = 1/8`: the threshold for
//!   touchdown from rest at the origin when `alpha = 0`, obtained from the
//!   potential-energy landmark `phi(lambda)` ([`dynamics`]).
//! * **Damped dynamic pull-in** `lambda_d*(alpha)`: the boundary between
//!   stable operation and finite-time touchdown, computed two independent
//!   ways — by bisecting on the axis crossing of the saddle's stable
//!   manifold ([`manifold`]) and by bisecting direct trajectory
//!   classifications ([`pullin`]).
//!
//! The crate is organized as a library first; each major capability has a
//! runnable demonstration under `examples/`:
//!
//! * `equilibria` — stationary solutions and their linearization across the
//!   static pull-in fold.
//! * `conservative_threshold` — the landmark function `phi` and the exact
//!   `1/8` threshold, with the homoclinic level set.
//! * `touchdown_run` — event-located finite-time touchdown of a trajectory.
//! * `manifold_trace` — the saddle manifold graph `Phi(u)`, its axis
//!   crossing, and the damping monotonicity that drives the threshold curve.
//! * `pullin_curve` — the curve `lambda_d*(alpha)` swept over damping values.
//! * `regime_map` — parallel classification of a parameter grid into the
//!   stable / critical / touchdown regimes.
//! * `phase_portrait` — plot-ready phase-plane data for a parameter point.
//! * `residence_times` — the three-timescale structure (approach, metastable
//!   dwell, collapse) just above the threshold.
//!
//! A thin binary (`mems-pullin`) exposes the same capabilities as CLI
//! subcommands emitting CSV or JSON; see the README for the flag reference.

// Monotonicity and acceptance tests on floats are written as `!(a > b)` on
// purpose: a NaN must land on the rejecting side, which `a <= b` would not do.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod manifold;
pub mod model;
pub mod pullin;
pub mod report;
pub mod steady;

mod error;
mod rk45;

pub use dynamics::{IntegrationOptions, Outcome, ResidenceProfile, Trajectory};
pub use error::{Error, Result};
pub use manifold::ManifoldTrace;
pub use model::{Params, PhaseState};
pub use pullin::{Method, PullInCurve, ThresholdPoint};
pub use steady::{Equilibria, StabilityReport};
