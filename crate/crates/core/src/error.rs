use thiserror::Error;

use crate::invariants::Violation;
use crate::cli::parse::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate variable name `{0}` in ring")]
    DuplicateVariable(String),

    #[error("variable `{0}` has weight 0")]
    ZeroWeight(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("n must be at least 1, got {0}")]
    NonPositiveDimension(usize),

    #[error("index k = {k} outside the allowed range {lo}..={hi}")]
    IndexOutOfRange { k: usize, lo: usize, hi: usize },

    #[error("invalid partition {parts:?}: weighted sum is {weight}, expected {expected}")]
    PartitionWeight {
        parts: Vec<u32>,
        weight: usize,
        expected: usize,
    },

    #[error("malformed partition `{0}`")]
    MalformedPartition(String),

    #[error("degree tuple has length {got}, expected {expected}")]
    DegreeTupleLength { got: usize, expected: usize },

    #[error("hypersurface degrees must be positive")]
    NonPositiveDegree,

    #[error("class has weighted degree {got}, expected {expected}")]
    ClassDegree { got: u32, expected: u32 },

    #[error("characteristic number table has no entry for `{0}`")]
    MissingEntry(String),

    #[error("malformed monomial key `{0}`")]
    MalformedKey(String),

    #[error("malformed rational `{0}`")]
    MalformedRational(String),

    #[error("invariant polynomial has weighted degree {got} > n = {n}")]
    DegreeTooHigh { got: u32, n: usize },

    #[error("invalid base: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidBase(Vec<Violation>),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid base file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
