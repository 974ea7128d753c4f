//! Experiment runner around `tmlab-core`: configuration, file formats,
//! CSV tables, and the subcommand drivers shared by the binary and the
//! acceptance suite.

pub mod config;
pub mod formats;
pub mod runner;
pub mod selfcheck;

/// Library version stamped into run manifests.
pub const LIBRARY_VERSION: &str = env!("CARGO_PKG_VERSION");
