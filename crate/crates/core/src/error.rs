use thiserror::Error;

/// Errors raised by group enumeration, Hecke algebra arithmetic and the
/// verification harness.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("integer overflow in Laurent polynomial coefficient arithmetic")]
    Overflow,

    #[error("unknown Coxeter type {0:?}")]
    UnknownType(String),

    #[error("malformed Coxeter matrix: {0}")]
    MalformedMatrix(String),

    #[error("generator {generator} out of range for rank {rank}")]
    InvalidGenerator { generator: usize, rank: usize },

    #[error("element {element} times generator {generator} leaves the enumerated range (cap {cap})")]
    OutOfRange {
        element: String,
        generator: usize,
        cap: usize,
    },

    #[error("a length cap is required for the infinite group {0}")]
    CapRequired(String),

    #[error("enumeration exceeded the element limit of {0}")]
    ResourceLimit(usize),

    #[error("expected a table of flavor {expected}, got {found}")]
    FlavorMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("element {0} is not a minimal coset representative")]
    NotCosetRep(String),

    #[error("canonical basis solve failed at ({y}, {x}): {reason}")]
    SolveFailed { y: String, x: String, reason: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
