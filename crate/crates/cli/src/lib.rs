//! Command-line driver for `fibrefilm-core`: configuration parsing, the
//! command pipelines and their CSV, summary and plot-script outputs.

pub mod analysis;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::run;
pub use config::{parse_config, parse_config_with, Command, RunConfig};
pub use error::{CliError, ConfigErrors, Result};
