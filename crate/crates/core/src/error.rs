use std::path::PathBuf;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario:\n  - {}", .0.join("\n  - "))]
    InvalidScenario(Vec<String>),

    #[error("failed to parse scenario: {0}")]
    ScenarioSyntax(String),

    #[error("time {t} s is outside the observation interval [0, {total}] s")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("window index {index} is outside 1..={count}")]
    WindowOutOfRange { index: usize, count: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
