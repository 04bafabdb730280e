//! Command-line front end for supervised log-ratio balance selection:
//! CSV ingestion, run configuration, JSON reports and the replication
//! harnesses behind the `slr` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod harness;
pub mod io;
pub mod report;

pub use commands::{run, Cli, Command};
pub use error::{CliError, Result};
