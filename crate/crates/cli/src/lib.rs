//! Config-driven runs, reference-table reproduction and output files for the
//! `fracwalk` binary.

pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod reproduce;

pub use config::{Prepared, RunConfig};
pub use error::{CliError, CliResult};
pub use output::SummaryRow;
