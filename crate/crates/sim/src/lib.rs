//! Command-line front end, configuration files, presets, parallel sweeps
//! and CSV output for the `polar-rsma-core` simulator.

pub mod cli;
pub mod config_file;
pub mod error;
pub mod output;
pub mod parallel;
pub mod presets;
pub mod validate;

pub use error::CliError;
