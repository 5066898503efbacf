//! Space documents, reports, DOT export and law suites for the `fluidcat`
//! command-line tool.

pub mod commands;
pub mod document;
pub mod dot;
pub mod error;
pub mod generate;
pub mod report;
pub mod suite;

pub use commands::{run, run_loaded, Command, Format, Outcome, RunConfig};
pub use error::{CliError, CliResult};
