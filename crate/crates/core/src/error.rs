use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("I/O error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("cannot parse {value:?} at row {row}, column {column}")]
    Parse {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("missing value at row {row}, column {column}")]
    MissingValue { row: usize, column: usize },

    #[error("ragged table: row {row} has {found} fields, expected {expected}")]
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid dataset: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("need at least {needed} curves, found {found}")]
    TooFewCurves { needed: usize, found: usize },

    #[error("negative tau at grid index {index}: {value}")]
    NegativeTau { index: usize, value: f64 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
