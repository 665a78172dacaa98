use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{source_name}: empty embedding file")]
    EmptyEmbeddings { source_name: String },

    #[error("{source_name}:{line}: expected {expected} columns, found {found}")]
    InconsistentColumns {
        source_name: String,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{source_name}:{line}: could not parse {token:?} as a number")]
    NonNumeric {
        source_name: String,
        line: usize,
        token: String,
    },

    #[error("{source_name}:{line}: non-finite value {token:?}")]
    NonFinite {
        source_name: String,
        line: usize,
        token: String,
    },

    #[error("word {word:?} has a zero-norm vector and cannot be normalized")]
    ZeroNorm { word: String },

    #[error("vector for {word:?} has length {found}, model dimension is {expected}")]
    DimensionMismatch {
        word: String,
        expected: usize,
        found: usize,
    },

    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {required} values, got {found}")]
    TooFewValues { required: usize, found: usize },

    #[error("zero variance in {which}")]
    ZeroVariance { which: &'static str },

    #[error("centered matrix is all zero; no principal direction exists")]
    DegenerateMatrix,

    #[error("singular weighted normal equations at ridge {ridge}; try a positive ridge (e.g. 1e-6)")]
    Singular { ridge: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension {dimension:?}: no resolvable words in the {pole} pole")]
    EmptyPole {
        dimension: String,
        pole: &'static str,
    },

    #[error("dimension {dimension:?}: direction norm {norm:e} is degenerate")]
    DegenerateDirection { dimension: String, norm: f64 },

    #[error("measure {measure} needs a {expected} model, got a {found} one")]
    NormalizationMismatch {
        measure: &'static str,
        expected: &'static str,
        found: &'static str,
    },

    #[error("word {0:?} is not in the embedding vocabulary")]
    OutOfVocabulary(String),

    #[error("dimension {0:?} has no multiclass block")]
    NotMulticlass(String),

    #[error("dimension {dimension:?}: category {category:?} is not defined")]
    UnknownCategory { dimension: String, category: String },

    #[error("unknown survey schema {0:?}")]
    UnknownSchema(String),

    #[error("{source_name}:{line}: {message}")]
    MalformedRow {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("identity {identity:?} missing from {context}")]
    MissingIdentity { identity: String, context: String },

    #[error("group {0:?} has no valid accuracy")]
    EmptyGroup(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
