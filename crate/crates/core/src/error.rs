use thiserror::Error;

/// Errors surfaced by corpus construction and analysis operations.
///
/// Per-record problems during ingestion are *not* errors: they become
/// [`crate::model::Rejection`] entries so that one bad record never aborts
/// a batch. This type covers contract violations and I/O failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("empty lexicon: no valid rows in {path}")]
    EmptyLexicon { path: String },

    #[error("no dateable charters in corpus")]
    NoDateableCharters,

    #[error("slice range bounds must be multiples of 50, got [{lo}, {hi}]")]
    BadSliceRange { lo: i32, hi: i32 },

    #[error("slice count must be at least 1, got {0}")]
    BadSliceCount(i64),

    #[error("slice count {k} exceeds number of dateable charters {n}")]
    TooManySlices { k: usize, n: usize },

    #[error("contingency table is empty after filtering")]
    EmptyTable,

    #[error("no charters match the filter")]
    EmptyFilter,

    #[error("degenerate contingency table: need at least 2 rows and 2 columns, got {rows}x{cols}")]
    DegenerateTable { rows: usize, cols: usize },

    #[error("checkpoint {checkpoint} exceeds stream length {len}")]
    CheckpointOutOfRange { checkpoint: usize, len: usize },

    #[error("unknown lemma: {0}")]
    UnknownLemma(String),

    #[error("pivot {0} has no co-occurrents")]
    NoCooccurrents(String),

    #[error("term {0} not present in vector space")]
    UnknownTerm(String),

    #[error("term {0} has a zero vector; cosine is undefined")]
    ZeroVector(String),

    #[error("requested dimension {d} exceeds maximum {max}")]
    BadDimension { d: usize, max: usize },

    #[error("cluster count {k} is invalid for {n} points")]
    BadClusterCount { k: usize, n: usize },

    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("training data must contain at least 2 classes, found {0}")]
    SingleClass(usize),

    #[error("class {0} is unknown to the model")]
    UnknownClass(String),

    #[error("cross-validation needs at least 2 folds, got {0}")]
    BadFoldCount(usize),

    #[error("region {0} has zero tokens")]
    EmptyRegion(String),

    #[error("bounding box is empty or inverted")]
    EmptyBbox,

    #[error("no located occurrences inside the bounding box")]
    NoLocatedOccurrences,

    #[error("charter {0} has no tokens")]
    EmptyCharter(String),

    #[error("empty slice plan")]
    EmptySlicePlan,

    #[error("index file {path}: {reason}")]
    BadIndexFile { path: String, reason: String },

    #[error("unsupported index format version {found}, expected {expected}")]
    IndexVersion { found: u32, expected: u32 },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
