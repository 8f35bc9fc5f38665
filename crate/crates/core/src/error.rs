use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("size mismatch: {left} vs {right} vertices")]
    SizeMismatch { left: usize, right: usize },

    #[error("graphs share the edge {0}-{1}")]
    OverlappingEdges(usize, usize),

    #[error("vertex index {index} out of range for {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("a pair state needs two distinct vertices, got {0}-{0}")]
    DegeneratePair(usize),

    #[error("expected a positive integer, got {0}")]
    NonPositive(String),

    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("numeric eigensolver could not separate eigenvalue clusters: {0}")]
    NumericFailure(String),

    #[error("states are of different kinds (vertex vs pair)")]
    KindMismatch,

    #[error("states have dimension {state} but the decomposition has dimension {dim}")]
    DimensionMismatch { state: usize, dim: usize },

    #[error("certification requires an exact spectral decomposition")]
    NotExact,

    #[error("both states describe the same pair or vertex")]
    SameState,

    #[error("eigenvalues of the support lie in different quadratic fields")]
    MixedFields,

    #[error("graph {0} is not regular")]
    NotRegular(&'static str),

    #[error("factor graph has no admissible base transfer: {0}")]
    HNoPST(String),

    #[error("adjacency matrices do not commute")]
    NonCommuting,

    #[error("time must be positive and an exact rational multiple of the base time: {0}")]
    InvalidTime(String),
}
