use thiserror::Error;

/// Errors raised by construction, checking and computation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("level {requested} exceeds truncation level {truncation}")]
    TruncationExceeded { requested: usize, truncation: usize },

    #[error("operation needs n >= 1, got n = 0")]
    ZeroDimension,

    #[error("monoidal product undefined on required pairs: {}", .pairs.join("; "))]
    UndefinedProduct { pairs: Vec<String> },

    #[error("product {left} * {right} escapes the truncated carrier")]
    ClosureEscape { left: String, right: String },

    #[error("axiom `{axiom}` violated: {witness}")]
    AxiomViolation { axiom: String, witness: String },

    #[error("exactness not certified for columns: {}", .columns.join(", "))]
    ExactnessNotCertified { columns: Vec<String> },

    #[error("hypothesis `{condition}` failed: {witness}")]
    HypothesisFailed { condition: String, witness: String },

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no monoidal structure on this space")]
    MissingMonoidal,

    #[error("space carries non-trivial automorphisms; a set-level space is required")]
    NotSetLevel,

    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
