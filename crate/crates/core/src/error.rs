use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown curve kind `{0}`")]
    UnknownCurveKind(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("degenerate segment {segment}: derivative vanishes at every quadrature node")]
    DegenerateSegment { segment: usize },

    #[error("measure normalization failed: total weight is {0}")]
    ZeroMass(f64),

    #[error("curve kind `{0}` has no discretized measure; use the closed-form generator")]
    NoDiscretization(&'static str),

    #[error("arc length quadrature did not converge within {panels} panels")]
    QuadratureNotConverged { panels: usize },

    #[error("moment matrix lost positive definiteness at pivot {pivot} (condition estimate {condition:e})")]
    NotPositiveDefinite { pivot: usize, condition: f64 },

    #[error("Arnoldi breakdown at step {step}: residual norm {residual:e}")]
    Breakdown { step: usize, residual: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{what}: expected {expected}, got {got}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot evaluate a Laurent map at z = 0")]
    EvaluationAtZero,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
