use thiserror::Error;

/// Errors raised by the numerical toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singularity at r = {r}: {what}")]
    Singularity { r: f64, what: &'static str },

    #[error("no sign change of U before r = {reached} (cap {cap})")]
    NoZeroFound { reached: f64, cap: f64 },

    #[error("profile is not admissible: {0}")]
    NotAdmissible(String),

    #[error("integrator failed at r = {r}: {reason}")]
    StepFailure { r: f64, reason: String },

    #[error("root bracketing failed: {0}")]
    Bracketing(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("empty grid")]
    EmptyGrid,

    #[error("missing derivative for nonlinearity '{0}' and finite-difference fallback disabled")]
    MissingDerivative(String),

    #[error("every row of the scan failed; first failure: {0}")]
    AllRowsFailed(String),

    #[error("insufficient R range for a stable asymptote fit: {0}")]
    InsufficientRange(String),

    #[error("unsupported group action: {0}")]
    UnsupportedGroup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
