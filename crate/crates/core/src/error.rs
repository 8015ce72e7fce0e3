use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("gamma argument must be a positive half-integer, got {0}")]
    NotPositiveHalfInteger(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("invalid generator name {0:?}: expected 1 to 12 ASCII letters, digits or '_', starting with a letter")]
    InvalidName(String),
    #[error("direction {0} out of range (1..=3)")]
    DirectionOutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("unsupported dimension {0}: only 2 and 3 are modelled")]
    UnsupportedDimension(usize),
    #[error("gamma index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("leading component is not central-plus-nilpotent: {0}")]
    EllipticityShape(String),
    #[error("square root requires even order, got {0}")]
    OddOrder(i32),
    #[error("symbol known only down to degree {available}, degree {needed} required")]
    InsufficientDepth { needed: i32, available: i32 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("malformed family: {0}")]
    MalformedFamily(String),
    #[error("component of degree {0} is not a polynomial in xi")]
    NotPolynomial(i32),
    #[error("unsupported exponent {0}")]
    UnsupportedExponent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }
}
