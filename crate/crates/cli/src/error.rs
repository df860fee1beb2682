use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_DATA: i32 = 4;
pub const EXIT_SINGULAR: i32 = 5;
pub const EXIT_CONVERGENCE: i32 = 6;
pub const EXIT_MC_ABORTED: i32 = 7;
pub const EXIT_INTERNAL: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] alasso::error::Error),

    #[error("{0}")]
    Usage(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read snapshot {path}: {message}")]
    Snapshot { path: PathBuf, message: String },

    #[error("the selected fit did not converge (lambda_n = {lambda}); results were written but are unreliable")]
    NotConverged { lambda: f64 },

    #[error("artifact check failed for {path}: {message}")]
    Artifact { path: PathBuf, message: String },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        use alasso::error::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Artifact { .. } => EXIT_IO,
            CliError::Snapshot { .. } => EXIT_DATA,
            CliError::NotConverged { .. } => EXIT_CONVERGENCE,
            CliError::Core(e) => match e {
                E::Io { .. } => EXIT_IO,
                E::SingularDesign { .. } | E::NotPositiveDefinite(_) => EXIT_SINGULAR,
                E::McAborted { .. } => EXIT_MC_ABORTED,
                E::Contract(_) => EXIT_INTERNAL,
                E::Csv(_)
                | E::MissingColumn(_)
                | E::DuplicateHeader(_)
                | E::BadCell { .. }
                | E::LengthMismatch { .. }
                | E::NonFinite { .. }
                | E::TooShort { .. }
                | E::InvalidSpec(_)
                | E::NonStationary(_)
                | E::Config(_) => EXIT_DATA,
            },
        }
    }
}
