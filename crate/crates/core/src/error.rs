use thiserror::Error;

/// Errors raised by map construction, certification and geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gauge violated: d+e+f = {sum:e} exceeds tolerance {tol:e}")]
    GaugeViolation { sum: f64, tol: f64 },

    #[error("negative entry w[{row}][{col}] = {value:e}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("matrix is not doubly scalable: row/column sums spread {spread:e}")]
    NotDoublyScalable { spread: f64 },

    #[error("input matrix is not Hermitian (deviation {deviation:e})")]
    NonHermitianInput { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("minor index set must be nonempty")]
    EmptyIndexSet,

    #[error("simplex point invalid: {0}")]
    InvalidSimplexPoint(String),

    #[error("negative radicand {value:e} in edge function F{edge}")]
    NegativeRadicand { edge: usize, value: f64 },

    #[error("condition {condition} is not saturated (value {value:e})")]
    ConditionNotSaturated { condition: String, value: f64 },

    #[error("edge {edge} is degenerate: radicand {radicand:e} below threshold")]
    DegenerateEdge { edge: usize, radicand: f64 },

    #[error("index {index} out of range 1..=3")]
    IndexOutOfRange { index: usize },

    #[error("base parameters inadmissible: {0}")]
    InadmissibleBase(String),

    #[error("(b, c) = ({b}, {c}) is not admissible")]
    Inadmissible { b: f64, c: f64 },

    #[error("(b, c) lies in region {found}, expected {expected}")]
    WrongRegion { expected: String, found: String },

    #[error("no real intersection: discriminant {discriminant:e}")]
    NoRealIntersection { discriminant: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("map is not on the circulant slice d = e = f = 0")]
    NotOnCirculantSlice,

    #[error("map is not positive")]
    NotPositive,

    #[error("invalid tolerance {name} = {value}")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
