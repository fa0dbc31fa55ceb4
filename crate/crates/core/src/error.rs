use thiserror::Error;

/// Errors raised when a construction or check is asked to run outside its
/// domain of validity.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ring radius {0} is below the first ring (d >= 32)")]
    RingTooSmall(u64),

    #[error("ring exponent {0} is below 5")]
    ExponentTooSmall(u32),

    #[error("points {i} and {j} are {distance} apart, closer than the required {required}")]
    PointsTooClose {
        i: usize,
        j: usize,
        distance: f64,
        required: f64,
    },

    #[error("point {0} sits at the origin; its tilted axis is undefined")]
    PointAtOrigin(usize),

    #[error("eps = {eps} is outside (0, {max}]")]
    EpsOutOfRange { eps: f64, max: f64 },

    #[error("L = {0} violates L >= 6")]
    SlopeConstantTooSmall(f64),

    #[error("point {0} is not a member of the ring set (integer d >= 32 required)")]
    NotRingPoint(usize),

    #[error("{pairs} pairs exceed the exhaustive budget of {budget}")]
    PairBudgetExceeded { pairs: u64, budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
