use thiserror::Error;

/// Errors raised by the cross-entropy library.
///
/// Divergent integrals and sums are *not* errors: they are reported as
/// `f64::INFINITY` (or a result flagged `diverged`). The variants below cover
/// invalid input and numerical failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid alpha {0}: the order must be positive")]
    InvalidAlpha(f64),

    #[error("alpha {0} is within 1e-9 of 1; use the Shannon marker (AlphaOrder::ONE) instead")]
    AlphaNearOne(f64),

    #[error("unsupported order {alpha} for {operation}")]
    UnsupportedAlpha {
        alpha: String,
        operation: &'static str,
    },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("family mismatch: {0} vs {1}")]
    FamilyMismatch(&'static str, &'static str),

    #[error("not normalized (expected sum≈1): sum={0}")]
    NotNormalized(f64),

    #[error("natural parameter outside the {family} domain: {detail}")]
    OutOfDomain {
        family: &'static str,
        detail: String,
    },

    #[error("support has infinite measure")]
    InfiniteSupport,

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("argument {t} outside the MGF domain ({lo}, {hi})")]
    MgfDomain { t: f64, lo: f64, hi: f64 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("spectral density {value} at frequency {lambda} is not positive")]
    NonPositivePsd { lambda: f64, value: f64 },

    #[error("matrix is not irreducible")]
    NotIrreducible,

    #[error("zero mass at index {0} while alpha < 1")]
    ZeroMass(usize),

    #[error("zero transition probability {from} -> {to} while alpha < 1")]
    ZeroTransition { from: usize, to: usize },

    #[error("degenerate: {0}")]
    Degenerate(&'static str),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {value}, error {error})")]
    NonConvergence {
        subdivisions: usize,
        value: f64,
        error: f64,
    },

    #[error("iteration did not converge: {0}")]
    IterationLimit(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
