use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{op}: matrix must be square, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("enumeration of 2^{bits} items exceeds cap of 2^{cap_bits}")]
    CapExceeded { bits: usize, cap_bits: usize },

    #[error("zero termination infeasible: no steering sequence from {from} to the zero state within {horizon} steps")]
    TerminationInfeasible { from: String, horizon: usize },

    #[error("no valid codeword satisfies the termination constraint")]
    NoValidCodeword,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
