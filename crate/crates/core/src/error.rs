use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("operands live over different {0}")]
    Mismatch(&'static str),
    #[error("proper {0} required")]
    ImproperArgument(&'static str),
    #[error("element index {index} out of range for carrier of size {size}")]
    OutOfRange { index: usize, size: usize },
    #[error("table has wrong shape: {0}")]
    Shape(String),
    #[error("{0} is not a multiplication module")]
    NotMultiplication(String),
    #[error("set is not classical 1-absorbing prime m-closed: {0}")]
    NotMClosed(String),
    #[error("map is not a module homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("classification flags violate the implication chain: {0}")]
    ChainViolation(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("closure exceeded {0} iterations")]
    ClosureBudget(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
