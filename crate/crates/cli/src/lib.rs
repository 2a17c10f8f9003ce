//! Command-line front end: instance documents, graph6 and DOT export, and the
//! `build`, `check`, `transform` and `oracle` subcommands.

pub mod commands;
pub mod document;
pub mod dot;
pub mod graph6;

pub use commands::{run, Cli, CliError};
pub use document::{GraphPayload, InstanceDocument};
