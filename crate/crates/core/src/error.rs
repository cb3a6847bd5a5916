use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("coefficient rings differ")]
    RingMismatch,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("invalid dimension: {0}")]
    BadDimension(String),
    #[error("scalar {0} is not a canonical element of the ring")]
    NotInRing(String),

    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("column {column}: unknown variable `{name}`")]
    UnknownVariable { column: usize, name: String },

    #[error("component {component} is not of the form lambda*x + (terms of degree >= 2): {detail}")]
    MalformedNormalization { component: usize, detail: String },

    #[error("degenerate generator: {0}")]
    DegenerateGenerator(String),
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("zero or non-invertible denominator: {0}")]
    ZeroDenominator(String),
    #[error("lambda_{index} is not invertible in the ring")]
    NonInvertibleLambda { index: usize },
    #[error("generator f_{component} depends on x{variable}; only earlier variables are allowed")]
    TriangularityViolated { component: usize, variable: usize },

    #[error("linear part of the map is not invertible over the ring")]
    NonInvertibleLinearPart,
    #[error("component {component} has a nonzero constant term")]
    NonzeroConstantPart { component: usize },

    #[error("block has length {found}, key dimension is {expected}")]
    BlockLengthMismatch { expected: usize, found: usize },
    #[error("malformed ciphertext: {0}")]
    MalformedCiphertext(String),
}
