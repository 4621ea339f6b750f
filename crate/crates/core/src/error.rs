use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite (pivot {pivot} at row {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("difference order must be 1, 2 or 3, got {0}")]
    InvalidOrder(usize),

    #[error("stochastic probing needs at least {min} probes, got {found}")]
    InvalidProbeCount { min: usize, found: usize },

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("non-finite input at index {index}")]
    NonFiniteInput { index: usize },

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("need at least {needed} observed samples, got {found}")]
    TooFewObservations { needed: usize, found: usize },

    #[error("invalid regularization parameter {0}")]
    InvalidLambda(f64),

    #[error("signal too short: need at least {needed} samples, got {found}")]
    SignalTooShort { needed: usize, found: usize },

    #[error("hat diagonal is degenerate at index {index} (1 - h = {gap:e}, lambda = {lambda:e})")]
    DegenerateHat { index: usize, lambda: f64, gap: f64 },

    #[error("only {usable} usable curve points remain (need at least 3)")]
    AllPointsDegenerate { usable: usize },

    #[error("unknown expression `{0}`")]
    UnknownExpression(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("invalid noise specification: {0}")]
    InvalidNoise(String),
}
