use thiserror::Error;

/// Errors raised by the numeric primitives and model maps.
///
/// Collapse of the triad map is not an error: it is recorded on the
/// trajectory (see [`crate::triad::Collapse`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("all coordinates are zero; cannot normalize")]
    ZeroTotal,
    #[error("coordinate {index} is negative ({value})")]
    NegativeCoordinate { index: usize, value: f64 },
    #[error("coordinate {index} is not finite")]
    NonFinite { index: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("need at least 2 regions, got {0}")]
    TooFewRegions(usize),
    #[error("coordinates sum to {sum}, not 1")]
    NotStochastic { sum: f64 },
    #[error("conflict index {theta} >= 1 makes the normalizer non-positive")]
    DegenerateIndex { theta: f64 },
    #[error("parameter {name} must be finite and > 0, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("trajectory was produced by {found}, expected {expected}")]
    WrongModel {
        expected: &'static str,
        found: &'static str,
    },
    #[error("epsilon {epsilon} pushes the perturbed vector off the simplex (n = {n})")]
    InvalidEpsilon { epsilon: f64, n: usize },
    #[error("coordinate index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("step count must be >= 1")]
    ZeroSteps,
    #[error("trajectory has {len} states, classification needs at least {required}")]
    TooShort { len: usize, required: usize },
    #[error("unknown selector `{0}`")]
    UnknownSelector(String),
    #[error("invalid classifier settings: {0}")]
    InvalidSettings(&'static str),
    #[error("parameter grid is empty")]
    EmptyGrid,
    #[error("collapse: {0}")]
    Collapse(crate::triad::Collapse),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
