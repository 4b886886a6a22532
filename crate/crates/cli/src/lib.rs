//! Configuration, scenario execution and file output for the `braggsim`
//! command-line tool.

pub mod config;
pub mod error;
pub mod output;
pub mod scenario;

pub use config::{Format, ScenarioConfig};
pub use error::CliError;
