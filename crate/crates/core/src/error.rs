use thiserror::Error;

/// Failures surfaced by the solver. Most of them indicate a violated
/// precondition (a non-square-free input, or a coefficient oracle that
/// cannot certify a nonzero value) rather than a bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("degree {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("zero denominator in coefficient {0}")]
    ZeroDenominator(usize),
    #[error("{what} undecided at precision cap of {cap} bits")]
    PrecisionCap { what: String, cap: u64 },
    #[error("iteration cap of {cap} exceeded while processing {interval}")]
    IterationCap { cap: u64, interval: String },
    #[error("interval {0} is too narrow to subdivide; the input is likely not square-free")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
