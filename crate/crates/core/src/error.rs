use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("malformed vertex map: {0}")]
    MalformedMap(String),

    #[error("malformed embedding: {0}")]
    MalformedEmbedding(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A structural fact that must hold on valid input did not.
    #[error("certificate violation ({property}): {detail}")]
    CertificateViolation { property: &'static str, detail: String },

    #[error("not locally triangulated: condition ({condition}) fails: {detail}")]
    LocalTriangulation { condition: char, detail: String },

    #[error("projection undefined at vertex {vertex}: no colour is switched on")]
    ProjectionUndefined { vertex: Vertex },

    #[error("state cap of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn violation(property: &'static str, detail: impl Into<String>) -> Self {
        Error::CertificateViolation {
            property,
            detail: detail.into(),
        }
    }
}
