use std::fmt;
use std::path::PathBuf;

/// Convergence report attached to optimizer failures and trained models.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Diagnostics {
    pub final_objective: f64,
    pub iterations: usize,
    /// Infinity-norm of the gradient (L2) or of the KKT residual (L1).
    pub violation: f64,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "objective {:.6e} after {} passes, violation {:.3e}",
            self.final_objective, self.iterations, self.violation
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed JSON at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("duplicate record id `{0}`")]
    DuplicateId(String),

    #[error("invalid keyword set: {0}")]
    KeywordSet(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("correlation undefined: zero variance")]
    UndefinedCorrelation,

    #[error("zero variance in both samples")]
    ZeroVariance,

    #[error("term `{0}` is not in the vocabulary")]
    NotInVocabulary(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate training set: {0}")]
    DegenerateTraining(&'static str),

    #[error("optimizer did not converge ({0})")]
    NonConvergence(Diagnostics),

    #[error("dimension mismatch: feature index {index} out of range for dimension {dim}")]
    DimensionMismatch { index: usize, dim: usize },

    #[error("vocabulary mismatch between model ({model}) and data ({data})")]
    VocabMismatch { model: String, data: String },

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Coarse classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Configuration,
    Data,
}

impl Error {
    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::KeywordSet(_) | Error::Config(_) | Error::Domain(_) => ErrorClass::Configuration,
            _ => ErrorClass::Data,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
