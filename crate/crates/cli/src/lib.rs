//! Library side of the `qcurv` binary: configuration, subcommands and the
//! checksummed output directory.

pub mod checks;
pub mod cmd;
pub mod config;
pub mod error;
pub mod output;

pub use checks::{Check, CheckReport};
pub use cmd::Context;
pub use config::RunConfig;
pub use error::CliError;
