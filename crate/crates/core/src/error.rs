use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} main piles, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid game rules: {0}")]
    InvalidRules(String),

    #[error("invalid position {pos}: {reason}")]
    InvalidPosition { pos: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {what} would exceed the configured limit of {limit}")]
    ResourceLimit { what: &'static str, limit: u64 },

    #[error("value not realizable: {value} is not below the SG value {sg} of {pos}")]
    ValueNotRealizable { pos: String, value: u64, sg: u64 },

    #[error("closed form requires n >= 3 (got n = {n})")]
    ClosedFormRequiresN3 { n: usize },

    #[error("k(0) undefined; caller must special-case v=0")]
    KOfZero,

    #[error("position {pos} lies outside the table box {bounds}")]
    OutOfTable { pos: String, bounds: String },

    #[error("move construction failed for {pos} and target {value}: {detail}")]
    ConstructionFailed { pos: String, value: u64, detail: String },

    #[error(transparent)]
    Cache(#[from] CacheError),
}

/// Failures while reading or writing a table cache file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CacheError {
    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed cache header: {0}")]
    MalformedHeader(String),

    #[error("unsupported cache version {found:?} (expected v1)")]
    Version { found: String },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("truncated cache: expected {expected} rows, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("variant mismatch: expected {expected}, file holds {found}")]
    VariantMismatch { expected: String, found: String },

    #[error("cache is not self-consistent at {pos}: stored {stored}, mex of successors {expected}")]
    Inconsistent { pos: String, stored: u64, expected: u64 },
}

impl From<std::io::Error> for CacheError {
    fn from(e: std::io::Error) -> Self {
        CacheError::Io(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Cache(CacheError::from(e))
    }
}
