use thiserror::Error;

pub type Result<T> = std::result::Result<T, TgsError>;

#[derive(Debug, Error)]
pub enum TgsError {
    /// A document or table is structurally broken.
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("element index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    /// Caller combined values that do not belong together.
    #[error("{0}")]
    Usage(String),

    #[error("{what} has size {size}, above the configured bound {bound}")]
    BoundExceeded {
        what: String,
        size: u128,
        bound: u128,
    },

    #[error("structure fails its axioms ({0}); rerun with --force for diagnostics")]
    InvalidStructure(String),

    #[error("sampled simulation requires an explicit seed")]
    MissingSeed,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl TgsError {
    /// Short, stable tag used as the machine-readable error prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            TgsError::Malformed(_)
            | TgsError::UnknownLabel(_)
            | TgsError::IndexOutOfRange { .. } => "malformed",
            TgsError::Usage(_) => "usage",
            TgsError::BoundExceeded { .. } => "bound",
            TgsError::InvalidStructure(_) => "invalid-structure",
            TgsError::MissingSeed => "usage",
            TgsError::Io(_) => "io",
            TgsError::Json(_) => "malformed",
        }
    }
}
