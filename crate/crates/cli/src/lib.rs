//! Library side of the `proframe` command line tool: document format,
//! report rendering, command dispatch and the seeded self-test battery.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;
pub mod selftest;

pub use commands::{execute, run, Cli, Command, Outcome};
pub use document::{emit_document, parse_document, FrameDocument};
pub use error::CliError;
pub use report::Report;
