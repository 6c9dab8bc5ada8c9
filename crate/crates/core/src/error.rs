use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit reports. [`Error::exit_code`] maps each variant
/// onto the command-line exit status.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("byte offset {offset}: {message}")]
    Record { offset: usize, message: String },

    #[error("unrecognized label {raw:?} (accepted: {})", crate::ingest::LABEL_ALIASES)]
    Label { raw: String },

    #[error("{what} {value} outside [{min}, {max}]")]
    Range {
        what: String,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("line {line}: duplicate id {id:?}")]
    Duplicate { line: usize, id: String },

    #[error("integrity: {0}")]
    Integrity(String),

    #[error("missing predictions for {} pair(s): {}", .missing.len(), .missing.join(","))]
    Join { missing: Vec<String> },

    #[error("no predicates extracted for statement {statement:?}")]
    NoPredicates { statement: String },

    #[error("pair {pair_id}: {source}")]
    Pair {
        pair_id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("empty statistics: {0}")]
    EmptyStats(String),

    #[error("degenerate evaluation input: {0}")]
    Degenerate(String),

    #[error("cannot render prompt: {0}")]
    Render(String),

    #[error("unrecognizable model answer {0:?}")]
    Answer(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn for_pair(self, pair_id: &str) -> Self {
        Error::Pair {
            pair_id: pair_id.to_string(),
            source: Box::new(self),
        }
    }

    /// Short machine-readable category, used as the CLI error prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::Record { .. } => "parse",
            Error::Label { .. } => "label",
            Error::Range { .. } => "range",
            Error::Duplicate { .. } => "duplicate",
            Error::Integrity(_) => "integrity",
            Error::Join { .. } => "join",
            Error::NoPredicates { .. } => "no-predicates",
            Error::Pair { source, .. } => source.kind(),
            Error::EmptyStats(_) => "empty-stats",
            Error::Degenerate(_) => "degenerate",
            Error::Render(_) => "render",
            Error::Answer(_) => "answer",
            Error::Config(_) => "config",
            Error::Contract(_) => "contract",
            Error::Io { .. } => "io",
        }
    }

    /// 1 = parse/config, 2 = data integrity, 3 = degenerate evaluation input.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse { .. }
            | Error::Record { .. }
            | Error::Label { .. }
            | Error::Range { .. }
            | Error::Config(_)
            | Error::Io { .. } => 1,
            Error::Degenerate(_) => 3,
            Error::Pair { source, .. } => source.exit_code(),
            Error::Duplicate { .. }
            | Error::Integrity(_)
            | Error::Join { .. }
            | Error::NoPredicates { .. }
            | Error::EmptyStats(_)
            | Error::Render(_)
            | Error::Answer(_)
            | Error::Contract(_) => 2,
        }
    }
}
