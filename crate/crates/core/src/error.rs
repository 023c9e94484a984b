use thiserror::Error;

/// Errors raised while parsing an expression.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at byte {offset} is not an integer literal")]
    NonIntegerExponent { offset: usize },
}

/// A numeric failure while evaluating an expression, naming the offending subexpression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{node}`")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub node: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EvalErrorKind {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root domain error")]
    SqrtDomain,
    #[error("non-finite value")]
    NonFinite,
    #[error("wrong number of arguments")]
    Arity,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error in {context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("chart rejected: Lagrangean residual {residual:e} at ({x}, {y}) exceeds {tolerance:e}")]
    NotLagrangean {
        residual: f64,
        x: f64,
        y: f64,
        tolerance: f64,
    },
    #[error("empty or invalid domain: {0}")]
    Domain(String),
    #[error("degenerate metric (W = {w:e}) at ({x}, {y})")]
    DegenerateMetric { w: f64, x: f64, y: f64 },
    #[error("point ({x}, {y}) is not an inflection (rank {rank})")]
    NotInflection { x: f64, y: f64, rank: usize },
    #[error("genericity violated: {0}")]
    Genericity(String),
    #[error("seed ({x}, {y}) lies in the elliptic region")]
    EllipticSeed { x: f64, y: f64 },
    #[error("no real asymptotic branch {branch} at ({x}, {y})")]
    NoRealBranch { branch: usize, x: f64, y: f64 },
    #[error("field vanishes on the loop at ({x}, {y})")]
    SingularOnLoop { x: f64, y: f64 },
    #[error("ambiguous index: raw value {raw} is {residual} away from a half-integer")]
    AmbiguousIndex { raw: f64, residual: f64 },
    #[error("singular points ({x1}, {y1}) and ({x2}, {y2}) overlap at winding radius {radius}")]
    OverlappingSingularities {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        radius: f64,
    },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
