use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to a violated
/// precondition; mathematical failures (a lemma that does not hold) are
/// reported through [`crate::report::Report`] instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameters outside the admissible set: {0}")]
    InvalidParameters(String),

    #[error("point {0} lies outside [0, 1)")]
    PointOutOfRange(String),

    #[error("malformed rational {0:?}")]
    MalformedRational(String),

    #[error("k must be at least 1, got {0}")]
    InvalidK(u64),

    #[error("dimension must be at least {min}, got {got}")]
    InvalidDimension { min: usize, got: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix has negative entries")]
    NegativeEntries,

    #[error("matrix is singular or its inverse is not integral")]
    NotUnimodular,

    #[error("induction hit a boundary tie at step {step}: {reason}")]
    Boundary { step: usize, reason: String },

    #[error("itinerary mismatch: expected k = {expected}, lengths give k = {found}")]
    ItineraryMismatch { expected: u64, found: String },

    #[error("sequence too short: need {needed} entries, have {have}")]
    SequenceTooShort { needed: usize, have: usize },

    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("polynomial is reducible over Q")]
    Reducible,

    #[error("constant term too large to enumerate divisors: {0}")]
    CoefficientTooLarge(String),

    #[error("index ({0}, {1}) is not off-diagonal in range")]
    InvalidIndex(usize, usize),

    #[error("malformed word expression: {0}")]
    MalformedWord(String),

    #[error("identity failed at {step}: {detail}")]
    IdentityFailed { step: String, detail: String },

    #[error("degenerate sampling spec: {0}")]
    DegenerateSpec(String),

    #[error("numerical rank loss after {0} steps")]
    RankLoss(usize),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
