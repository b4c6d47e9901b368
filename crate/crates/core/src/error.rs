use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyaError {
    #[error("distribution is not normalized: {0}")]
    Normalization(String),
    #[error("degenerate inter-arrival law: pi_0 = 1 means no draw ever happens between arrivals")]
    Degenerate,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("quadrature did not reach tolerance {tolerance:e} (error estimate {estimate:e})")]
    Quadrature { tolerance: f64, estimate: f64 },
    #[error("instance too large for exact enumeration: {0}")]
    TooLarge(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("missing limit moment of order {0}")]
    MissingMoment(usize),
    #[error("degenerate resampling weights for power {power}: one point carries {share:.3} of the mass")]
    DegenerateWeights { power: u32, share: f64 },
    #[error("empty batch")]
    EmptyBatch,
    #[error("index out of range: {0}")]
    Index(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, PolyaError>;
