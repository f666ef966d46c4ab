//! Library side of the `bhdimer` command-line tool: output tables, literal
//! parsing, settings and the subcommand implementations.

pub mod commands;
pub mod complex;
pub mod config;
pub mod error;
pub mod record;
pub mod selftest;

pub use error::CliError;
pub use record::{Format, OutputRecord, Value};
