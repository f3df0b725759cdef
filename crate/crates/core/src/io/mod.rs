//! Plain-file artifacts: logs, local and global maps, SVG sketches, run
//! manifests. Every file carries the hash of the effective configuration and
//! every float is written with 17 significant digits.

pub mod logs;
pub mod maps;
pub mod run;
pub mod svg;
mod text;

pub use run::{
    config_hash, execute, render, replay, sha256_hex, Command, Overrides, ReplayOutcome,
    RunManifest, RunRequest, Stage, StageError,
};
pub use text::{fmt_f64, parse_f64};
