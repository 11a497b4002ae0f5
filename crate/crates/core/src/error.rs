use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {gen} out of range for rank {rank}")]
    InvalidLetter { gen: usize, rank: usize },

    #[error("word length {len} exceeds the letter cap {cap}")]
    CapacityExceeded { len: usize, cap: usize },

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("generator `{0}` has more than one rule")]
    DuplicateRule(String),

    #[error("generator `{0}` has no rule")]
    MissingGenerator(String),

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },

    #[error("group `{label}` exceeds the order cap {cap}")]
    OrderCapExceeded { label: String, cap: usize },

    #[error("fingerprint libraries differ: {0}")]
    LibraryMismatch(String),

    #[error(transparent)]
    NotAutomorphism(#[from] NotAutomorphism),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Why a map failed to invert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotAutomorphismReason {
    /// The abelianized map has determinant other than +-1.
    Determinant,
    /// Nielsen reduction stopped at a tuple that is not a signed permutation
    /// of the basis.
    NotABasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("map is not an automorphism ({reason:?})")]
pub struct NotAutomorphism {
    pub reason: NotAutomorphismReason,
}
