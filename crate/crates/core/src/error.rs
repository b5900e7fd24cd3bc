use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// Bisection saw a vanishing order below a diverging one.
    #[error("mass classification is not monotone in alpha near bracket [{lo}, {hi}]")]
    ClassificationInconsistent { lo: f64, hi: f64 },

    #[error("derivative undefined at {x}: no support point within the search window")]
    DerivativeUndefined { x: f64 },

    #[error("function is not integrable at this resolution: upper - lower = {gap:e} exceeds {tolerance:e}")]
    NonIntegrable { gap: f64, tolerance: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("integrating factor leaves floating-point range at s = {s} (log mu = {log_mu}); split the range at or before s = {suggested_split}")]
    Scaling { s: f64, log_mu: f64, suggested_split: f64 },

    #[error("solution leaves the real domain at s = {s}: {reason}")]
    Domain { s: f64, reason: String },

    #[error("invalid initial condition: {0}")]
    InvalidInitialCondition(String),

    #[error("solution branch terminates after s = {last_s} (last y = {last_y}): {reason}")]
    BranchTerminated { last_s: f64, last_y: f64, reason: String },

    #[error("inconsistent cooling measurement: temperature ratio {ratio} must lie in (0, 1)")]
    InconsistentMeasurement { ratio: f64 },

    #[error("expression `{source_text}`: {message}")]
    Expression { source_text: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
