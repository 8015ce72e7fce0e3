//! Command-line front end: named checks with reproducible reports, and raw
//! symbolic and numerical computations.

pub mod app;
pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod family;
pub mod report;
pub mod sampling;

pub use checks::{check_names, run_check, CHECKS};
pub use config::CheckConfig;
pub use error::CliError;
pub use report::{CheckReport, Level, Status};
