//! Library half of the `pcroc` command: league parity summaries, SVG output
//! and the subcommand implementations.

pub mod commands;
pub mod error;
pub mod input;
pub mod parity;
pub mod svg;

pub use commands::{run, Cli};
pub use error::CliError;
