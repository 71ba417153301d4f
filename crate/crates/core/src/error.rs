use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("substitution profile mismatch at vertex {vertex}: expected {expected}, got {found}")]
    SubstitutionProfile {
        vertex: usize,
        expected: String,
        found: String,
    },
    #[error("edge {0} is not an ordinary internal edge")]
    ShrinkDomain(usize),
    #[error("reduction precondition failed: {0}")]
    ReductionPrecondition(String),
    #[error("scheme `{0}` is not shrinkable")]
    UnsupportedScheme(String),
    #[error("automorphism group exceeds the order cap of {0}")]
    AutomorphismCap(usize),
    #[error("invalid subgroup embedding: {0}")]
    InvalidSubgroup(String),
    #[error("equivariance error: {0}")]
    Equivariance(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("incomplete oracle: {0}")]
    IncompleteOracle(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
