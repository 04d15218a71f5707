//! Experiments, file formats and the command-line front end for
//! [`sideinfo_core`].
//!
//! * [`config`] is the TOML run configuration and its schema.
//! * [`instance_file`] reads and writes discrete instances as JSON.
//! * [`presets`] holds the built-in instances and ready-made runs.
//! * [`experiments`] drives the core on a thread pool and builds the
//!   artifacts that [`output`] writes.
//! * [`cli`] is the `sideinfo` command.

pub mod cli;
pub mod config;
mod error;
pub mod experiments;
pub mod instance_file;
pub mod output;
pub mod presets;

pub use error::{CliError, Result};
