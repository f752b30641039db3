use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series has a zero leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("exponent {requested} (in 1/24 units) is at or beyond the truncation {truncation}")]
    BeyondTruncation { requested: i64, truncation: i64 },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("pole at argument: {0}")]
    PoleAtArgument(String),
    #[error("quadrature did not converge (last change {last_change:e})")]
    QuadratureNonConvergence { last_change: f64 },
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("affine character denominator vanishes")]
    DenominatorVanishes,
    #[error("unsupported character specification: {0}")]
    UnsupportedSpec(String),
    #[error("coefficient at exponent {units}/24 is not integral: {value}")]
    NonIntegralCoefficient { units: i64, value: String },
    #[error("gcd({d}, {c}) != 1")]
    NotCoprime { d: i64, c: i64 },
    #[error("modulus c = {0} must be even for the Gamma_0(2) family")]
    ParityViolation(u64),
    #[error("corrupt cache record at line {line}: {reason}")]
    CacheCorrupt { line: usize, reason: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
