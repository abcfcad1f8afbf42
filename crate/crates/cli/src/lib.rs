//! JSON front end over `linham-core`: parse system specs, run one command per
//! input file, and emit a deterministic report.

pub mod commands;
pub mod error;
pub mod report;
pub mod spec;

pub use commands::{run, Command, Options};
pub use error::CliError;
pub use report::Report;
pub use spec::{parse_spec, parse_spec_str, SystemSpec};
