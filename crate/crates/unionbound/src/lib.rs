//! File formats, instance generators, benchmark reports and invariant
//! suites built on [`unionbound_core`].

use std::path::PathBuf;

pub mod cli;
pub mod genbench;
pub mod instance;
pub mod report;
pub mod verify;

pub use instance::Instance;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed instance JSON: {0}")]
    Json(#[source] serde_json::Error),
    #[error(transparent)]
    Core(#[from] unionbound_core::Error),
    #[error(transparent)]
    UnknownBound(#[from] unionbound_core::UnknownBound),
    #[error("invalid generator configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
}
