use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error in `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid function spec: {0}")]
    InvalidSpec(String),

    #[error("point {x} lies outside the domain [{a}, {b}]")]
    OutOfDomain { x: String, a: String, b: String },

    #[error("numeric mode does not support {0}")]
    ModeUnsupported(String),

    #[error("invalid numeric mode: {0}")]
    InvalidMode(String),

    #[error("exact denominator has {digits} digits, above the configured limit of {limit}")]
    Overflow { digits: u64, limit: u64 },

    #[error("partition size n = {n} outside the supported range 1..={max}")]
    PartitionSize { n: u64, max: u64 },

    #[error("piecewise-linear slopes are neither nondecreasing nor nonincreasing")]
    UnclassifiablePiecewise,

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
