use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library. The CLI maps each variant onto a stable
/// exit code (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node id {0}")]
    UnknownNode(u32),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParam { field: &'static str, reason: String },

    #[error("non-growing configuration: nu = 0 but target_nodes ({target}) > n0 ({n0})")]
    NonGrowing { n0: usize, target: usize },

    #[error("modularity undefined: graph has no edges")]
    ModularityUndefined,

    #[error("{path}:{line}: malformed edge line: {reason}")]
    Malformed {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("cannot open input {path}: {source}")]
    MissingInput {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("metric settings differ between reports")]
    MismatchedSettings,

    #[error("{0}")]
    Runtime(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            field,
            reason: reason.into(),
        }
    }

    /// 0 success, 2 config error (including an input path that cannot be
    /// opened), 3 input error (unparseable input content), 4 runtime failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParam { .. }
            | Error::Config(_)
            | Error::NonGrowing { .. }
            | Error::MissingInput { .. } => 2,
            Error::Malformed { .. } => 3,
            _ => 4,
        }
    }
}
