use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix dimensions do not match: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("solution is not integral")]
    NotIntegral,
    #[error("polytope is not full dimensional (dimension {affine} in ambient dimension {ambient})")]
    NotFullDimensional { affine: usize, ambient: usize },
    #[error("polytope does not have the interior point property")]
    NotIp,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("invalid weight system: {0}")]
    InvalidCws(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("capability limit exceeded: {0}")]
    Capability(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
