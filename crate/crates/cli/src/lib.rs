//! File formats, experiment recipes and command dispatch for the `arspec`
//! binary.

pub mod args;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod manifest;
pub mod run;

pub use args::{Cli, Command};
pub use error::{CliError, Result};
pub use run::run;
