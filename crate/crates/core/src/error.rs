use thiserror::Error;

/// Errors raised by the exact-arithmetic pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: ({0}, {1}) vs ({2}, {3}) (variables, order)")]
    RingMismatch(usize, usize, usize, usize),
    #[error("element is not a unit: {0}")]
    NonUnit(String),
    #[error("substituted series must have zero constant term")]
    NonzeroConstantTerm,
    #[error("constant term {0} is not the square of a rational")]
    NotASquare(String),
    #[error("supplied root {root} does not square to the constant term {constant}")]
    RootMismatch { root: String, constant: String },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("defining polynomial has even degree {0}")]
    EvenDegree(usize),
    #[error("defining polynomial must have odd degree at least 3, got {0}")]
    DegreeTooSmall(usize),
    #[error("defining polynomial is not squarefree")]
    NotSquarefree,
    #[error("duplicate x-value {0}")]
    DuplicateX(String),
    #[error("point ({x}, {y}) is a Weierstrass point")]
    WeierstrassPoint { x: String, y: String },
    #[error("point ({x}, {y}) does not lie on the curve")]
    NotOnCurve { x: String, y: String },
    #[error("no squarefree curve found within {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("candidate stream exhausted after {consumed} candidates (best rank {best_rank} of {needed})")]
    SelectionExhausted {
        consumed: usize,
        best_rank: usize,
        needed: usize,
    },
    #[error("found {found} admissible rational points, need at least {needed}")]
    InsufficientPoints { found: usize, needed: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
