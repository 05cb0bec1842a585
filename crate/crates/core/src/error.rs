use thiserror::Error;

/// Errors shared across the library.
///
/// Infinite divergences are not errors; they are legitimate return values.
/// Errors mark contract violations (bad inputs, alphabet mismatches) or
/// resource-guard refusals.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDist(String),

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("invalid empirical type: {0}")]
    InvalidType(String),

    #[error("symbol {symbol} out of range for alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },

    #[error("{count} types would exceed the enumeration cap of {cap}")]
    TypeCapExceeded { count: u128, cap: u128 },

    #[error("degenerate tilted distribution: {0}")]
    DegenerateTilt(String),

    #[error("infeasible constraint: {0}")]
    Infeasible(String),

    #[error("empty feasible set: {0}")]
    EmptyFeasibleSet(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid too large: {0}")]
    GridTooLarge(String),

    #[error("invalid code table: {0}")]
    InvalidCodeTable(String),

    #[error("numerical check failed: {0}")]
    NumericalCheckFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed input file: {0}")]
    MalformedInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
