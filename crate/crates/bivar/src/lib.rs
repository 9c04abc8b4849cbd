//! File formats and the command-line surface for `bivar-core`.
//!
//! - [`format`]: the function file (a JSON object with a fixed key order);
//! - [`text`]: signature tables, canonical sidecars and sampled matrices;
//! - [`mm`]: importing a metric measure space as a symmetric function;
//! - [`cli`]: the `bivar` command.

pub mod cli;
pub mod format;
pub mod mm;
pub mod text;

use std::path::Path;

pub use bivar_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// Malformed input; `context` names the line or field.
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error(transparent)]
    Core(#[from] bivar_core::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_error(context: impl Into<String>, message: impl ToString) -> Error {
    Error::Parse { context: context.into(), message: message.to_string() }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.display().to_string(), source })
}
