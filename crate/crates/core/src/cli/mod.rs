//! Command-line front end: configuration, output formatting and the
//! subcommands of the `tdem` binary.

pub mod commands;
pub mod config;
pub mod format;
pub mod verify;

pub use config::{MassSpec, OutputFormat, RunConfig, PAPER_TOY};
pub use format::{sci, GridAxis, Sink};
pub use verify::{run_verify, Mutation, VerifyReport};
