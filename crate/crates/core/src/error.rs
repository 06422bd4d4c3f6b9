use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive representative")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid instance: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("Hilbert basis requires pointed cone")]
    NotPointed,

    #[error("{0} requires enumeration box")]
    MissingBox(&'static str),

    #[error("G* too large; raise limit (m*r = {size}, limit {limit})")]
    TooLarge { size: usize, limit: usize },

    #[error("integer generator must be nonzero")]
    ZeroGenerator,

    #[error("point is not basic: real support columns are linearly dependent")]
    NotBasic,

    #[error("{0}")]
    Infeasible(String),

    #[error("problem is unbounded")]
    Unbounded,
}
