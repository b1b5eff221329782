use thiserror::Error;

/// Library error type. Configuration problems and numerical failures are kept
/// apart so callers can map them to distinct process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree {degree} for {kind} rule: {reason}")]
    InvalidDegree {
        kind: &'static str,
        degree: usize,
        reason: &'static str,
    },

    #[error("unsupported finite-difference interior order {0} (supported: 2, 4)")]
    UnsupportedFdOrder(usize),

    #[error("{nodes} nodes is too few for the order-{order} boundary closure (need >= {min})")]
    TooFewFdNodes {
        order: usize,
        nodes: usize,
        min: usize,
    },

    #[error("dissipation strength must be >= 0, got {0}")]
    NegativeDissipation(f64),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("coefficient function returned a non-finite value at x = {x}")]
    NonFiniteCoefficient { x: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("solution blew up at t = {t} (non-finite or > 1e100)")]
    BlowUp { t: f64 },

    #[error("characteristics solve failed at t = {t}, x = {x}: {reason}")]
    CharacteristicsFailure { t: f64, x: f64, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
