use thiserror::Error;

/// Errors raised by the model catalog, boundary sampling, winding and
/// wave-operator routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter is NaN")]
    NanParameter,

    #[error("cannot parse '{0}' as a parameter value")]
    ParseParameter(String),

    #[error("-inf is not a valid model parameter")]
    NegativeInfiniteParameter,

    #[error("energy must lie in [0, +inf], got {0}")]
    EnergyOutOfRange(f64),

    #[error("dilation coordinate is NaN")]
    NanDilation,

    #[error(
        "point (eps, a) is interior to the spectral square; gamma is only defined on the boundary"
    )]
    InteriorPoint,

    #[error("|gamma| = {modulus:e} fell below the guard threshold at side {side}, t = {t}")]
    NearZero { side: String, t: f64, modulus: f64 },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("phase step bound not met on side {side} after {cap} refinements")]
    RefinementExhausted { side: String, cap: u32 },

    #[error("loop is not closed: gap {gap:e} at {location}")]
    NotClosed { location: String, gap: f64 },

    #[error("tolerance must lie in (0, 0.1], got {0}")]
    InvalidTolerance(f64),

    #[error("sweep parameter list is empty")]
    EmptySweep,

    #[error("grid coverage violation: {0}")]
    GridCoverage(String),

    #[error("log grid too coarse: spectral content near Nyquist is {ratio:e} of peak")]
    GridTooCoarse { ratio: f64 },

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("invalid golden table data: {0}")]
    Golden(String),
}

pub type Result<T> = std::result::Result<T, Error>;
