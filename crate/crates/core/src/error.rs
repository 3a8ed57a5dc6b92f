use alloc::string::String;

use thiserror::Error;

use crate::Dyadic;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a dyadic rational: {0:?}")]
    Dyadic(String),
    #[error("not a rational number: {0:?}")]
    Rational(String),
    #[error("malformed point {0:?}: {1}")]
    Point(String, &'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("height {0} lies outside [0, 1]")]
    HeightOutOfRange(Dyadic),
    #[error("points have different truncation depths ({0} vs {1})")]
    DepthMismatch(usize, usize),
    #[error("coordinate {index} = {value} violates 1 <= a_i <= i")]
    BadCoordinate { index: usize, value: u32 },
    #[error("level {level} outside the admissible range {min}..={max}")]
    LevelOutOfRange { level: usize, min: usize, max: usize },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(Dyadic),
    #[error("degenerate interval ({0}, {1})")]
    DegenerateInterval(Dyadic, Dyadic),
    #[error("empty point set")]
    EmptySet,
    #[error("cone apex lies in its set (distance zero)")]
    DegenerateCone,
    #[error("ball has zero measure")]
    NullBall,
    #[error("subject point does not lie in the set")]
    NotInSet,
    #[error("no witnesses given")]
    NoWitnesses,
    #[error("no increments given")]
    NoIncrements,
    #[error("unsupported chart dimension {0} (expected 1 or 2)")]
    UnsupportedDimension(usize),
    #[error("increment has non-positive distance")]
    NonPositiveDistance,
    #[error("no vertical derivative: quotients did not stabilise by scale 2^-{0}")]
    NoVerticalDerivative(u32),
    #[error("height must lie strictly inside (0, 1)")]
    HeightNotInterior,
    #[error("inadmissible cover: {0}")]
    Inadmissible(CoverViolation),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Which smallness condition of the three-rectangle cover failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverViolation {
    #[error("the window (t-r, t+r) meets I_0, so r is not small enough")]
    MeetsLevelZero,
    #[error("the window (t-r, t+r) meets I_{level} but nu_{next}/nu_{level} = 1/{next} is not < epsilon/2", next = level + 1)]
    RatioTooLarge { level: usize },
    #[error("height lies on the grid I_{0}, inside the resolved levels")]
    HeightOnGrid(u32),
    #[error("no grid of level <= {0} meets (t-r/2, t+r/2); the truncation depth cannot resolve k_1")]
    TooShallow(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
