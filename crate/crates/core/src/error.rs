use thiserror::Error;

/// Errors raised by the chain computations.
///
/// Every variant has a stable machine-readable name (see [`Error::name`]) which
/// the command-line front-end prints as a single token.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// An exponent would exceed the double-precision guard.
    #[error("exponent {exponent:.3} exceeds the overflow guard of {limit}")]
    OverflowRisk { exponent: f64, limit: f64 },

    /// The energy grid cannot resolve the sign structure of the scanned function.
    #[error(
        "grid of {coarse_steps} steps finds {coarse_count} {what}, a 4x refined grid finds \
         {refined_count}; increase the number of steps"
    )]
    GridTooCoarse {
        what: &'static str,
        coarse_steps: usize,
        coarse_count: usize,
        refined_count: usize,
    },

    /// The half-trace lies outside [-1, 1], so no Bloch label exists.
    #[error("half-trace {x} lies outside the band germ")]
    OutOfBand { x: f64 },

    /// The cell has a vanishing off-diagonal entry (for instance zero potential strength).
    #[error("degenerate cell: {0}")]
    DegenerateCell(&'static str),

    #[error("single-well bound energy has half-trace {x}, outside the band germ")]
    BoundOutsideGerm { x: f64 },

    /// |d| is too small to invert the amplitude relation.
    #[error("scattering matrix pole: |d| = {modulus:e}")]
    ResonancePole { modulus: f64 },

    #[error("Fibonacci order {m} exceeds the supported maximum {max}")]
    OrderTooLarge { m: usize, max: usize },

    /// The operation is only defined for the other energy regime.
    #[error("operation requires the {0} regime")]
    WrongRegime(&'static str),

    /// The single-cell dispersion is not monotone inside the germ.
    #[error("dispersion is not monotone on [{lo}, {hi}]")]
    NonMonotoneDispersion { lo: f64, hi: f64 },
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::OverflowRisk { .. } => "OverflowRisk",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::OutOfBand { .. } => "OutOfBand",
            Error::DegenerateCell(_) => "DegenerateCell",
            Error::BoundOutsideGerm { .. } => "BoundOutsideGerm",
            Error::ResonancePole { .. } => "ResonancePole",
            Error::OrderTooLarge { .. } => "OrderTooLarge",
            Error::WrongRegime(_) => "WrongRegime",
            Error::NonMonotoneDispersion { .. } => "NonMonotoneDispersion",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
