use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex set must not be empty")]
    EmptyVertexSet,

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("graph is disconnected ({} components; sizes {:?})", .components.len(), .components.iter().map(Vec::len).collect::<Vec<_>>())]
    Disconnected { components: Vec<Vec<usize>> },

    #[error("need at least 2 samples to estimate covariance, got {0}")]
    NotEnoughSamples(usize),

    #[error("non-finite value at sample {row}, vertex {col}")]
    NonFinite { row: usize, col: usize },

    #[error("neighbor count k={k} must satisfy 1 <= k < n={n}")]
    InvalidNeighborCount { k: usize, n: usize },

    #[error("graph of order {n} exceeds the exhaustive enumeration cap of {cap}; use the local finder")]
    TooLarge { n: usize, cap: usize },

    #[error("graph too dense around vertex {vertex}: 2-hop neighborhood has {size} vertices (cap {cap})")]
    TooDense { vertex: usize, size: usize, cap: usize },

    #[error("vertex {0} was never reached by the kernel propagation")]
    UnreachedCenter(usize),

    #[error("{what}: expected length {expected}, got {got}")]
    ShapeMismatch { what: &'static str, expected: usize, got: usize },

    #[error("proxy-translation {index} is not injective: vertices {first} and {second} both map to {target}")]
    NonInjective { index: usize, target: usize, first: usize, second: usize },

    #[error("index {index} out of range for kernel of size {kappa}")]
    IndexOutOfRange { index: usize, kappa: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
