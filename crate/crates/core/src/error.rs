use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record at line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },

    #[error("label at line {line} references unknown comment {comment_id:?} or entity {entity:?}")]
    DanglingLabel { line: usize, comment_id: String, entity: String },

    #[error("comment {comment_id:?} has overlapping mentions {first:?} and {second:?}")]
    OverlappingMentions { comment_id: String, first: String, second: String },

    #[error("comment {comment_id:?} sentence {sentence}: parse has {found} tokens, segmenter produced {expected}")]
    TokenMismatch {
        comment_id: String,
        sentence: usize,
        expected: usize,
        found: usize,
    },

    #[error("comment {comment_id:?} sentence {sentence}: head links contain a cycle")]
    CyclicTree { comment_id: String, sentence: usize },

    #[error("comment {comment_id:?} sentence {sentence}: invalid tree: {reason}")]
    InvalidTree {
        comment_id: String,
        sentence: usize,
        reason: String,
    },

    #[error("text is empty or whitespace only")]
    EmptyText,

    #[error("entity {entity:?} is not annotated on comment {comment_id:?}")]
    UnknownEntity { comment_id: String, entity: String },

    #[error("malformed lexicon row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("word {word:?} carries more than one polarity")]
    DisjointnessViolation { word: String },

    #[error("training data contains a single class{}", if .0.is_empty() { String::new() } else { format!(": {}", .0) })]
    SingleClassData(String),

    #[error("feature {feature:?} has negative value {value} (multinomial model needs counts)")]
    NegativeCount { feature: String, value: f64 },

    #[error("{folds} folds requested but class {class} has only {support} instances")]
    InsufficientClassSupport { folds: usize, class: i64, support: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Errors caused by bad input data or arguments, as opposed to
    /// failures inside the program.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::Io { source, .. } => source.kind() == std::io::ErrorKind::NotFound,
            _ => true,
        }
    }
}
