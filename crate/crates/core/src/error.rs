use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fusion ring: {0}")]
    InvalidRing(String),
    #[error("invalid premodular data: {0}")]
    InvalidData(String),
    #[error("data is not modular: {0}")]
    NotModular(String),
    #[error("Verlinde entry N[{a},{b}]^{c} = {value} is not a non-negative integer")]
    Integrality { a: usize, b: usize, c: usize, value: f64 },
    #[error("Gauss sum is anomalous: |xi| = {0} (degenerate data)")]
    AnomalousGaussSum(f64),
    #[error("ill-formed pinned map: {0}")]
    InvalidPinned(String),
    #[error("inconsistent symmetric data: {0}")]
    InconsistentData(String),
    #[error("not condensable: {0}")]
    NotCondensable(String),
    #[error("underdetermined condensation: {0}")]
    UnderdeterminedCondensation(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("closure failure: {0}")]
    ClosureFailure(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no match: {0}")]
    NoMatch(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
