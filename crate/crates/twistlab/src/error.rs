//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid braid word: {0}")]
    InvalidBraid(String),

    #[error("no catalog knot named {0:?}; `twistlab catalog` lists them")]
    UnknownKnot(String),

    #[error("invalid twist region: {0}")]
    InvalidRegion(String),

    #[error("closure has {components} components; only knots are supported")]
    NotAKnot { components: usize },

    /// Too many grid states retained; `detail` names the Alexander level
    /// being filled (or the full enumeration) when the cap was crossed.
    #[error("state budget exceeded: more than {limit} states retained ({detail})")]
    StateBudget { limit: u64, detail: String },

    #[error("matrix budget exceeded: more than {limit} nonzero boundary entries")]
    EntryBudget { limit: u64 },

    /// The graded data contradicts the tensor model that the hat-flavor
    /// extraction relies on (negative or non-integral solution, overflow).
    #[error("graded model violation: {0}")]
    ModelViolation(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("refusing to take the Euler characteristic of a truncated table")]
    TruncatedTable,

    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: u64, q: u64 },

    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },

    /// Homology tables are absent or too shallow at the listed twist counts.
    #[error("homology tables missing or too shallow for m = {ms:?}")]
    MissingTables { ms: Vec<u32> },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
