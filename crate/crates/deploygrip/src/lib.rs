//! Configuration files, CSV output and the `deploygrip` command line on top
//! of [`deploygrip_core`].

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod optimize;
pub mod params;
pub mod sweep;
pub mod validate;

pub use config::{FileConfig, Model};
pub use error::{CliError, CliResult};
