//! Errors and process exit codes.

use thiserror::Error;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code when a verification or predicate check fails.
pub const EXIT_VERIFICATION: i32 = 1;
/// Exit code for usage and parameter errors.
pub const EXIT_USAGE: i32 = 2;

/// Errors surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lattice(#[from] lightcone::LatticeError),
    #[error(transparent)]
    Structure(#[from] lightcone::StructureError),
    #[error(transparent)]
    Unitarity(#[from] lightcone::UnitarityError),
    #[error(transparent)]
    Oracle(#[from] lightcone_oracle::OracleError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        EXIT_USAGE
    }
}
