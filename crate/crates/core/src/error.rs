use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(String),

    #[error("column `{0}` not found")]
    MissingColumn(String),

    #[error("duplicate column name `{0}`")]
    DuplicateHeader(String),

    #[error("cannot parse cell at row {row}, column `{column}`: {value:?}")]
    BadCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("column `{column}` has length {got}, expected {expected}")]
    LengthMismatch {
        column: String,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in column `{column}` at row {row}")]
    NonFinite { column: String, row: usize },

    #[error("series too short: {got} observations, need at least {needed}")]
    TooShort { needed: usize, got: usize },

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("singular design (condition number {condition:.3e}); offending columns: {columns:?}")]
    SingularDesign { condition: f64, columns: Vec<String> },

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("non-stationary configuration: {0}")]
    NonStationary(String),

    #[error("Monte Carlo run aborted: {failures} of {replications} replications failed")]
    McAborted {
        failures: usize,
        replications: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
