use thiserror::Error;

/// Crate-wide error type.
///
/// Structural misuse inside a single computation (mixing scalars from
/// different fields in arithmetic operators, out-of-bounds indices) panics;
/// these variants cover conditions that are data-dependent and recoverable:
/// bad input text, values outside a model's window, searches that fail at the
/// configured bound.
#[derive(Debug, Error)]
pub enum Error {
    /// Inversion of zero, in a field or in the scalar ring.
    #[error("division by zero")]
    DivisionByZero,

    /// Operands belong to different ambient contexts (field, prime, window).
    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    /// Matrix or vector dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A group element lies outside the subgroup an operation requires.
    #[error("element outside required subgroup: {0}")]
    OutOfSubgroup(String),

    /// A name (suite, generator, format) is not recognised.
    #[error("unknown name: {0}")]
    UnknownName(String),

    /// A numeric parameter is outside its admissible range.
    #[error("out of range: {0}")]
    Range(String),

    /// An input is structurally valid but outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A character required to be nontrivial (or tame, or unramified) is not.
    #[error("degenerate character: {0}")]
    DegenerateCharacter(String),

    /// An operation requires a different character type than the one supplied.
    #[error("character mismatch: {0}")]
    CharacterMismatch(String),

    /// A vector asserted to be an eigenvector is not one.
    #[error("not an eigenvector: {0}")]
    NotEigen(String),

    /// A function's support leaves the truncation ball of the model.
    #[error("support overflow: {0}")]
    SupportOverflow(String),

    /// A windowed function model cannot represent the result within its caps.
    #[error("window overflow: {0}")]
    WindowOverflow(String),

    /// A cache entry fails its integrity check and must be recomputed.
    #[error("cache integrity failure: {0}")]
    Checksum(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
