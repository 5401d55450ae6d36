use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("trailing AR coefficient is zero; the order is overstated")]
    ZeroTrailingCoefficient,

    #[error("roots are not stationary: max |λ| = {max_modulus} (margin {margin})")]
    NonStationary { max_modulus: f64, margin: f64 },

    #[error("roots {first} and {second} are {distance:e} apart, within the cluster threshold")]
    ClusteredRoots {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("root solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("{tuples:e} index tuples exceed the direct-sum budget of {budget:e}")]
    BudgetExceeded { tuples: f64, budget: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("t = {t} lies outside the annulus {inner} < |t| < {outer}")]
    OutsideAnnulus { t: String, inner: f64, outer: f64 },

    #[error("imaginary part {imag:e} exceeds realness tolerance for conjugate-closed roots")]
    RealnessViolation { imag: f64 },

    #[error("lag {lag} must be smaller than the series length {len}")]
    LagTooLarge { lag: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EMPTY_INPUT",
            Error::NonFinite(_) => "NON_FINITE",
            Error::ZeroTrailingCoefficient => "ZERO_TRAILING_COEFFICIENT",
            Error::NonStationary { .. } => "NON_STATIONARY",
            Error::ClusteredRoots { .. } => "CLUSTERED_ROOTS",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::OutsideAnnulus { .. } => "OUTSIDE_ANNULUS",
            Error::RealnessViolation { .. } => "REALNESS_VIOLATION",
            Error::LagTooLarge { .. } => "LAG_TOO_LARGE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }
}
