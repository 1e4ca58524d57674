//! JSON front end for the `livsic-core` pipelines.
//!
//! Exit codes: 0 when the property holds, 1 when it fails (the witness is
//! on stdout), 2 on invalid input (a JSON error object on stderr).

pub mod commands;
pub mod document;
pub mod error;

pub use commands::{run, Output};
pub use error::CliError;
