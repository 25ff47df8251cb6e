//! Experiment driver for `floquet-core`: parallel runner, per-point
//! summaries, CSV/JSON artifacts with manifests, and the command-line
//! subcommands built on them. File layouts are described in `docs/formats.md`.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod manifest;
pub mod runner;
pub mod summary;

pub use commands::Command;
pub use config::Params;
pub use error::{LabError, LabResult};
