//! Crate-wide error type.

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix that must be symmetric positive definite is not: a Cholesky
    /// pivot came out non-positive.
    #[error("matrix is not positive definite (pivot {pivot:.6e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    /// A matrix handed to a constructor is not exactly symmetric.
    #[error("matrix entry ({row},{col}) != ({col},{row}): not symmetric")]
    NotSymmetric { row: usize, col: usize },

    /// A dimension precondition failed (empty matrix, mismatched lengths, ...).
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Fewer than two rows where a covariance or variance is required.
    #[error("need at least 2 rows, got {0}")]
    InsufficientRows(usize),

    /// A CSV cell failed to parse as a number.
    #[error("cannot parse cell at row {row}, column {col}: {text:?}")]
    ParseError {
        row: usize,
        col: usize,
        text: String,
    },

    /// An empty or non-finite CSV cell.
    #[error("missing or non-finite value at row {row}, column {col}")]
    MissingValue { row: usize, col: usize },

    /// Two header fields share a name.
    #[error("duplicate column name in header: {0:?}")]
    DuplicateHeader(String),

    /// A referenced column does not exist in the dataset.
    #[error("unknown column: {0:?}")]
    UnknownColumn(String),

    /// A column is constant or linearly dependent on its predecessors, so it
    /// cannot be orthogonalized or residualized against.
    #[error("degenerate column {0:?}: constant or linearly dependent")]
    DegenerateColumn(String),

    /// The design matrix is rank deficient beyond tolerance.
    #[error("rank-deficient design: {0}")]
    RankDeficient(String),

    /// A residualized regressor has (numerically) zero spread.
    #[error("zero variance in residualized regressor {0:?}")]
    ZeroVariance(String),

    /// A standard deviation that must be positive is not.
    #[error("standard deviation must be positive, got {0}")]
    NonPositiveSd(f64),

    /// Invalid configuration value (bad alpha, odd subject count, ...).
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
