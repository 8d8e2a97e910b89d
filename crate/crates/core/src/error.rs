use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows} rows but row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("{what} is not {property} (deviation {deviation:.3e})")]
    Classification {
        what: String,
        property: &'static str,
        deviation: f64,
    },

    /// An operation was handed the wrong kind of symmetry.
    #[error("misuse: {0}")]
    Misuse(String),

    /// A mathematical hypothesis of the operation does not hold.
    #[error("premise failed: {0}")]
    Premise(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid tolerance configuration: {0}")]
    Config(String),
}
