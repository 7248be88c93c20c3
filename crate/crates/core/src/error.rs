use std::fmt;

use thiserror::Error;

/// What went wrong while reading polynomial or input-file text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    NonIntegerExponent(String),
    NonConstantDivision,
    DivisionByZero,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "{msg}"),
            ParseErrorKind::UnknownVariable(name) => write!(f, "unknown variable `{name}`"),
            ParseErrorKind::NonIntegerExponent(tok) => {
                write!(f, "exponent must be a non-negative integer, found `{tok}`")
            }
            ParseErrorKind::NonConstantDivision => write!(f, "division by a non-constant"),
            ParseErrorKind::DivisionByZero => write!(f, "division by zero"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{column}: {kind}")]
    Parse { kind: ParseErrorKind, line: usize, column: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("variable name collision: `{0}` already belongs to the ring")]
    NameCollision(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a slice: δ(u) = {0}, expected 1")]
    NotASlice(String),
    #[error("local slice degenerate: δ(u') = 0")]
    ZeroLocalSlice,
    #[error("δ(a) ≠ 0 for a = {0}")]
    NotInKernel(String),
    #[error("element not nilpotent within {cap} iterations")]
    CapExceeded { cap: usize },
    #[error("no homogeneous weight system: {0}")]
    Inhomogeneous(String),
    #[error("no positive weight row with entries ≤ 10^6")]
    NoPositiveRow,
    #[error("missing or invalid weights: {0}")]
    InvalidWeights(String),
    #[error("module derivation not well defined on the quotient: {0}")]
    NotWellDefined(String),
    #[error("module derivation not locally nilpotent: {0}")]
    NotNilpotent(String),
    #[error("operation requires a free module (no relations)")]
    NonFree,
    #[error("modules are defined over different base derivations")]
    BaseMismatch,
    #[error("assumption violated: {0}")]
    Assumption(String),
    #[error("unknown catalog id `{0}`")]
    UnknownCatalogId(String),
    #[error("parameter `{name}`: {message}")]
    Parameter { name: String, message: String },
    #[error("{0}")]
    Input(String),
}

impl Error {
    pub(crate) fn parse(kind: ParseErrorKind, line: usize, column: usize) -> Self {
        Error::Parse { kind, line, column }
    }

    /// True for errors caused by unreadable text rather than by the mathematics.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
