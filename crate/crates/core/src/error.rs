use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature (g={g}, n={n}): {reason}")]
    InvalidSignature { g: u32, n: u32, reason: String },

    #[error("class {0} does not exist on this moduli space")]
    NonexistentClass(String),

    #[error("group closure exceeds {limit} elements")]
    GroupTooLarge { limit: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid number of marked points {n}: {reason}")]
    InvalidN { n: u32, reason: String },

    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    #[error("resource limit reached: {0}")]
    ResourceLimit(String),

    #[error("certificate rejected: {0}")]
    CertificateRejected(String),

    #[error("relation table rejected: {0}")]
    RelationTable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
