use thiserror::Error;

/// Error type shared across the library.
///
/// Variants mirror the failure classes of the public operations: argument
/// and range validation, unsupported splitting symbols, resource caps,
/// data-quality gates on empirical inputs, parse and cache-format errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("range: {0}")]
    Range(String),

    #[error("argument: {0}")]
    Argument(String),

    #[error("unsupported splitting symbol {symbol} for {group}")]
    UnsupportedSymbol { group: String, symbol: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("data quality: {0}")]
    DataQuality(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cache: {0}")]
    Cache(String),

    #[error("quadrature: {0}")]
    Quadrature(String),

    #[error("overflow in {0}")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
