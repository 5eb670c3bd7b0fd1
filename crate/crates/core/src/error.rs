use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix rows have inconsistent lengths")]
    Ragged,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("lattice is degenerate (determinant 0)")]
    Degenerate,

    #[error("lattice is odd: {0}")]
    OddLattice(String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("map is not injective")]
    NotInjective,

    #[error("map is not an isometric embedding")]
    NotEmbedding,

    #[error("discriminant group of order {order} exceeds the search bound {bound}")]
    GroupTooLarge { order: String, bound: u64 },

    #[error("unknown curve {0:?}")]
    UnknownCurve(String),

    #[error("malformed curve graph: {0}")]
    MalformedGraph(String),

    #[error("component set is disconnected")]
    Disconnected,

    #[error("cannot parse lattice name {0:?}")]
    BadName(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
