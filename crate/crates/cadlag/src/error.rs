use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong when building paths, evaluating metrics,
/// or running simulations. Variants are shared across modules so callers
/// can match on one type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("breakpoint times must start at 0 and strictly increase")]
    NonMonotoneTimes,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite number at index {0}")]
    NonFiniteValue(usize),
    #[error("argument {arg} outside [0, {hi}]")]
    OutOfDomain { arg: f64, hi: f64 },
    #[error("path is not nondecreasing and nonnegative")]
    NotMonotone,
    #[error("inner path reaches {needed} but outer domain ends at {available}")]
    RangeMismatch { needed: f64, available: f64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("delta must satisfy 0 < delta <= T, got {0}")]
    BadDelta(f64),
    #[error("step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("martingale increments have zero variance")]
    ZeroVariance,
    #[error("transition matrix is not irreducible")]
    ReducibleChain,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("empty sample")]
    EmptySample,
    #[error("quadrature stalled above tolerance {tol} (error estimate {err})")]
    QuadratureNonconverged { tol: f64, err: f64 },
    #[error("malformed path document: {0}")]
    BadFormat(&'static str),
}
