use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("invalid braiding: {0}")]
    InvalidBraiding(String),

    #[error("invalid root datum: {0}")]
    InvalidDatum(String),

    /// A connected component that the classification in scope does not cover.
    #[error("component {component:?} excluded: {reason}")]
    ExcludedComponent {
        component: Vec<usize>,
        reason: String,
    },

    #[error("component {component:?} is not a built-in family and no positive roots were supplied")]
    UnrecognizedComponent { component: Vec<usize> },

    #[error("subset is not closed by sums: {0}")]
    NotClosed(String),

    #[error("ground set has {size} elements, above the enumeration cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),

    #[error("parts overlap on vertex {vertex}")]
    OverlappingSupports { vertex: usize },

    #[error("{0}")]
    Invalid(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
