//! File formats, spec ingestion and the `freqlab` command line on top of
//! `freqlab-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod formats;
pub mod spec;
pub mod svg;

pub use cli::{run, Cli, Outcome};
pub use error::{CliError, CliResult};
