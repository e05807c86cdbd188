use thiserror::Error;

/// Errors raised by the estimators, the channel baseline and the experiment generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input: at least one sample is required")]
    EmptyInput,

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("bad weight: {0}")]
    BadWeight(String),

    #[error("oracle input too large: {n} samples exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("value {x} outside the representable channel range [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },

    #[error("channel vector has no positive coefficient")]
    EmptyVector,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
