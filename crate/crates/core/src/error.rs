use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field width w={0} (expected 8, 16 or 32)")]
    UnsupportedWidth(u32),

    #[error("polynomial {poly:#x} is not irreducible of degree {width}")]
    ReduciblePolynomial { width: u32, poly: u64 },

    #[error("region length mismatch: expected {expected} bytes, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("region of {len} bytes is not a multiple of the {elem}-byte field element")]
    MisalignedRegion { len: usize, elem: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("invalid code parameters: {0}")]
    InvalidCode(String),

    #[error("invalid STAIR configuration: {0}")]
    InvalidConfig(String),

    #[error("not enough symbols to decode: {present} present, {needed} needed")]
    InsufficientSymbols { present: usize, needed: usize },

    #[error("unrecoverable failure pattern: {0}")]
    Unrecoverable(String),

    #[error("cell ({row}, {col}) is not a data cell")]
    NotDataCell { row: usize, col: usize },

    #[error("unsupported reliability model: {0}")]
    UnsupportedModel(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("malformed container: {0}")]
    Container(String),

    #[error("bad pattern spec: {0}")]
    PatternSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
