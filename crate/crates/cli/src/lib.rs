//! Command-line front end: documents in, reports out.

pub mod commands;
pub mod document;
mod dot;
pub mod error;
mod repl;

pub use commands::{execute, run, Cli, Command};
pub use document::{Certificate, Document, MetricSpace, Report, Status};
