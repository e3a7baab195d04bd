use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions, variable counts or bidegrees do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("unknown variable: {0}")]
    UnknownVariable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    /// The sampler ran out of retries; `reason` names the last screen item that failed.
    #[error("genericity screen failed after {attempts} attempts: {reason}")]
    Genericity { attempts: usize, reason: String },

    /// A parameter hit one of the finitely many degenerate loci.
    #[error("non-generic parameter: {0}")]
    NonGeneric(String),

    #[error("resource budget exceeded: {0}")]
    Resource(String),

    #[error("backend inconsistency: {0}")]
    Inconsistency(String),

    #[error("parameter file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
