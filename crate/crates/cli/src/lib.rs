//! Command-line front end for the `regularity` library.
//!
//! Every command that produces evidence can write it as a JSON certificate
//! file, and `verify` re-checks such a file from scratch.

pub mod certificate;
pub mod commands;
pub mod rule;

use std::io;
use std::path::PathBuf;

use regularity::families::FamilyError;
use regularity::search::SearchError;
use regularity::{ColoringError, EquationError};
use thiserror::Error;

pub use certificate::{CertificateError, CertificateFile, CertificateKind, Payload, Verdict};
pub use commands::run;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET_EXHAUSTED: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: io::Error },
}
