use thiserror::Error;

/// Errors produced by the state constructors, correlation quantifiers and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Parameters outside the domain where a closed form is defined (e.g. `q = 1`).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("state does not have the required X pattern: {0}")]
    NotAnXState(String),

    #[error("no sudden change in q ∈ [{lo}, {hi}] for nu2 = {nu2}")]
    NoSuddenChange { nu2: f64, lo: f64, hi: f64 },

    #[error("no kink detected: largest slope jump {jump:.3e} below threshold {threshold:.3e}")]
    NoKinkDetected { jump: f64, threshold: f64 },

    #[error("rank-deficient fit: {0}")]
    RankDeficient(String),

    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
