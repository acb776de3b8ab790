use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("grid side {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("grids are incompatible: {0}")]
    IncompatibleGrids(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature order {0} is below the minimum of 4")]
    OrderTooLow(usize),
    #[error("sphere of radius {radius} around the evaluation point reaches a periodic image of the support")]
    WrapAround { radius: f64 },
    #[error("scale {0} is under-resolved by the grid or sampling rule")]
    UnderResolved(f64),
    #[error("pair-summation budget exceeded: n = {n}, d = {d}")]
    BudgetExceeded { n: usize, d: usize },
    #[error("profile is not certified in the normalized smooth class: {0}")]
    Uncertified(String),
    #[error("profile support violates the required interval: {0}")]
    SupportViolation(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("need at least {needed} records, got {got}")]
    TooFewRecords { needed: usize, got: usize },
    #[error("nonpositive ratio {0} in scan")]
    NonpositiveRatio(f64),
    #[error("induced radius {0} missing from the spherical radius set")]
    InducedRadiusMissing(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
