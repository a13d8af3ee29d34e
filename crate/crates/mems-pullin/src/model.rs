//! Core model definitions: force, potential, energy, and the phase-plane
//! vector field.
//!
//! Every symbol of the actuator model lives here. The second-order equation
//!
//! ```text
//! x'' + alpha x' + x = -lambda / (1 + x)^2
//! ```
//!
//! is handled as the first-order system
//!
//! ```text
//! x' = y
//! y' = -(alpha y + f(x, lambda)),     f(x, lambda) = x + lambda / (1 + x)^2
//! ```
//!
//! Stationary solutions satisfy `g(x) = -lambda` with the cubic
//! `g(x) = x (1 + x)^2`. The potential `F(x, lambda) = x^2/2 - lambda/(1+x)`
//! has `dF/dx = f`, and the orbit energy is `E(x, y) = y^2/2 + F(x, lambda)`.
//! For `alpha = 0` the energy is conserved; for `alpha > 0` it strictly
//! decreases along nonstationary orbits, which is the only consequence of the
//! energy law the rest of the crate relies on.
//!
//! All evaluations guard the singular gap: `x <= -1 + GAP_GUARD` is a domain
//! error, never an Inf/NaN.

use serde::Serialize;

use crate::{Error, Result};

/// Hard floor on the electrode gap `1 + x`.
///
/// The force diverges like `(1+x)^-2`; evaluations closer to the pole than
/// this are rejected so that adaptive trial steps fail cleanly instead of
/// overflowing before the touchdown event handler fires.
pub const GAP_GUARD: f64 = 1e-13;

#[inline]
fn check_gap(x: f64) -> Result<()> {
    // The comparison is written so that NaN also lands in the error arm.
    if x > -1.0 + GAP_GUARD {
        Ok(())
    } else {
        Err(Error::OutsideDomain { x })
    }
}

/// The parameter pair `(lambda, alpha)` defining one instance of the system.
///
/// `lambda > 0` is proportional to the square of the applied voltage;
/// `alpha >= 0` is the damping coefficient (`alpha = 1/gamma` for quality
/// factor `gamma`, `alpha = 0` the conservative case). Both invariants are
/// enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    lambda: f64,
    alpha: f64,
}

impl Params {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::BadLambda { lambda });
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::BadAlpha { alpha });
        }
        Ok(Self { lambda, alpha })
    }

    /// The undamped system at load `lambda`.
    pub fn conservative(lambda: f64) -> Result<Self> {
        Self::new(lambda, 0.0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// A point `(t, x, y)` along a trajectory in the phase plane.
///
/// `x > -1` strictly: touchdown states are represented only by the
/// [`Outcome::Touchdown`](crate::Outcome::Touchdown) variant, never as a
/// `PhaseState`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseState {
    t: f64,
    x: f64,
    y: f64,
}

impl PhaseState {
    pub fn new(t: f64, x: f64, y: f64) -> Result<Self> {
        if !t.is_finite() || !x.is_finite() || !y.is_finite() {
            return Err(Error::NonFiniteState { t, x, y });
        }
        check_gap(x)?;
        Ok(Self { t, x, y })
    }

    /// Rest at the undeflected position, the canonical initial condition.
    pub fn origin() -> Self {
        Self { t: 0.0, x: 0.0, y: 0.0 }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// Restoring-plus-electrostatic force `f(x, lambda) = x + lambda/(1+x)^2`.
pub fn force(x: f64, lambda: f64) -> Result<f64> {
    check_gap(x)?;
    let w = 1.0 + x;
    Ok(x + lambda / (w * w))
}

/// The cubic `g(x) = x (1 + x)^2`; stationary solutions satisfy
/// `g(x) = -lambda`.
pub fn cubic_g(x: f64) -> f64 {
    let w = 1.0 + x;
    x * w * w
}

/// Potential `F(x, lambda) = x^2/2 - lambda/(1+x)`, with `dF/dx = force`.
pub fn potential(x: f64, lambda: f64) -> Result<f64> {
    check_gap(x)?;
    Ok(0.5 * x * x - lambda / (1.0 + x))
}

/// Orbit energy `E = y^2/2 + F(x, lambda)`.
///
/// Constant along conservative orbits; nonincreasing when `alpha > 0`.
pub fn energy(state: &PhaseState, lambda: f64) -> Result<f64> {
    energy_xy(state.x, state.y, lambda)
}

/// Energy from raw coordinates; shared by the integrators.
pub fn energy_xy(x: f64, y: f64, lambda: f64) -> Result<f64> {
    Ok(0.5 * y * y + potential(x, lambda)?)
}

/// Linearized stiffness `df/dx = 1 - 2 lambda/(1+x)^3`, strictly increasing
/// in `x`. Negative at the saddle `x1`, positive at the stable root `x2`.
pub fn dforce_dx(x: f64, lambda: f64) -> Result<f64> {
    check_gap(x)?;
    let w = 1.0 + x;
    Ok(1.0 - 2.0 * lambda / (w * w * w))
}

/// Right-hand side of the first-order system: `(y, -(alpha y + f))`.
pub fn vector_field(state: &PhaseState, params: &Params) -> Result<(f64, f64)> {
    let f = force(state.x, params.lambda())?;
    Ok((state.y, -(params.alpha() * state.y + f)))
}
