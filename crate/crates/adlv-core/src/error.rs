use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root datum: {0}")]
    Unsupported(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector {0:?} is not in the coweight lattice")]
    NotInLattice(Vec<i64>),
    #[error("invalid affine node {node} (nodes are 0..{count})")]
    InvalidNode { node: usize, count: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("element is not rational: {0}")]
    NotRational(String),
    #[error("the two strata coincide")]
    IdenticalStrata,
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),
}

pub type Result<T> = std::result::Result<T, Error>;
