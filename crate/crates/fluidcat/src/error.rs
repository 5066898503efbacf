use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fluidcat_core::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed space document: {0}")]
    MalformedDocument(String),
    #[error("{command} has no DOT rendering")]
    NoDotRendering { command: &'static str },
    #[error("internal law violation: {0}")]
    LawViolation(String),
}

impl CliError {
    /// 2 for bad input or configuration, 3 for a broken internal law.
    pub fn exit_code(&self) -> i32 {
        use fluidcat_core::Error as E;
        match self {
            Self::LawViolation(_) | Self::Core(E::FunctorLawViolation(_) | E::NotCofibered(_) | E::InvalidTower(_)) => {
                3
            }
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
