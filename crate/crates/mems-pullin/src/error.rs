//! Crate-wide error type.

/// Errors reported by the analysis routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Evaluation at or past the touchdown singularity `x = -1`.
    #[error("x = {x} is at or below the touchdown guard x = -1 + 1e-13")]
    OutsideDomain { x: f64 },

    /// The load parameter must be finite and positive.
    #[error("lambda must be finite and positive, got {lambda}")]
    BadLambda { lambda: f64 },

    /// The damping coefficient must be finite and nonnegative.
    #[error("alpha must be finite and nonnegative, got {alpha}")]
    BadAlpha { alpha: f64 },

    /// A phase state must have finite coordinates.
    #[error("phase state ({t}, {x}, {y}) has a non-finite coordinate")]
    NonFiniteState { t: f64, x: f64, y: f64 },

    /// No stationary solutions exist (`lambda` above static pull-in).
    #[error("no stationary solutions for lambda = {lambda} (static pull-in is 4/27)")]
    NoEquilibria { lambda: f64 },

    /// The equilibrium pair is degenerate or absent, so no saddle exists.
    #[error("lambda = {lambda} admits no saddle (equilibria degenerate or absent)")]
    NoSaddle { lambda: f64 },

    /// A point passed as an equilibrium fails the residual check.
    #[error("x = {x} is not an equilibrium for lambda = {lambda}: |force| = {residual:.3e}")]
    NotAnEquilibrium { x: f64, lambda: f64, residual: f64 },

    /// Threshold queries require `lambda` strictly inside the stated range.
    #[error("threshold requires {lo} < lambda < {hi}, got {lambda}")]
    ThresholdDomain { lambda: f64, lo: f64, hi: f64 },

    /// Bracket growth hit its cap without finding a sign change.
    #[error("no {side} bracket endpoint found up to {param} = {horizon}")]
    BracketFailure {
        param: &'static str,
        horizon: f64,
        side: &'static str,
    },

    /// An operation that needs a touchdown orbit got something else.
    #[error("trajectory did not touch down (outcome: {outcome})")]
    NotTouchdown { outcome: String },

    /// The touchdown orbit never entered the requested saddle ball.
    #[error("orbit never entered the ball of radius {radius} around the saddle")]
    SaddleBallMiss { radius: f64 },

    /// A computed pull-in curve violates its shape invariants.
    #[error("pull-in curve shape violation: {0}")]
    CurveShape(String),

    /// Malformed input (grids, flags, file contents).
    #[error("{0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
