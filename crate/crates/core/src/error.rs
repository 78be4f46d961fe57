use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what} did not converge within {terms} terms")]
    NonConvergent { what: &'static str, terms: usize },

    #[error("argument ({x}, {y}) lies outside the supported region")]
    OutOfRegion { x: f64, y: f64 },

    #[error("quadrature tolerance not met: value {value:e}, error estimate {estimate:e}")]
    ToleranceNotMet { value: f64, estimate: f64 },

    #[error("coincident points: r^2 = {r_sq:e}")]
    CoincidentPoints { r_sq: f64 },

    #[error("degenerate tangent at parameter {t}")]
    DegenerateTangent { t: f64 },

    #[error("evaluation point lies on the boundary curve (distance {distance:e})")]
    PointOnBoundary { distance: f64 },

    #[error("Richardson extrapolation diverged (spread {spread:e})")]
    ExtrapolationDiverged { spread: f64 },

    #[error("system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("linear solve did not reach the residual target (relative residual {residual:e})")]
    NoConvergence { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParams(msg.into()))
}
