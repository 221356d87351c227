use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Whether an error stems from bad inputs or from a numerical breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("delta_t must be finite and > 0, got {0}")]
    InvalidDeltaT(f64),

    #[error("delta_p must lie in the open interval (0, 0.5), got {0}")]
    InvalidDeltaP(f64),

    #[error("support window requires 0 <= L < U, got L = {lower}, U = {upper}")]
    InvalidWindow { lower: f64, upper: f64 },

    #[error("{name} {expected}, got {value}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("transform is not a proper distribution: L(0) = {0}")]
    ImproperTransform(Complex64),

    #[error("transform modulus {modulus} exceeds 1 at s = j{y}")]
    UnboundedTransform { y: f64, modulus: f64 },

    #[error("transform evaluation failed at term n = {n}: {source}")]
    Evaluation {
        n: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("singular transform evaluation at s = {0}")]
    SingularEvaluation(Complex64),

    #[error("transform pole at s = {0}")]
    Pole(Complex64),

    #[error("non-finite partial sum at term n = {n}")]
    NumericalInstability { n: u64 },

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("time grid must be finite and strictly increasing (violated at index {index})")]
    UnorderedGrid { index: usize },

    #[error("quadrature did not converge: achieved relative error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("moment of order {needed} requested but only {available} available")]
    MissingMoments { needed: usize, available: usize },

    #[error("grid step {step} does not divide the service time {service} into whole cells")]
    GridNotAligned { service: f64, step: f64 },

    #[error("series grid needs {cells} cells, above the limit of {limit}; use a coarser grid step")]
    SeriesGridTooLarge { cells: usize, limit: usize },

    #[error("cdf decreases by {drop} at t = {t}, beyond the tolerance {tolerance}")]
    NonMonotoneTable { t: f64, drop: f64, tolerance: f64 },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidDeltaT(_)
            | Error::InvalidDeltaP(_)
            | Error::InvalidWindow { .. }
            | Error::InvalidParameter { .. }
            | Error::ImproperTransform(_)
            | Error::UnboundedTransform { .. }
            | Error::UnorderedGrid { .. }
            | Error::MissingMoments { .. }
            | Error::GridNotAligned { .. }
            | Error::SeriesGridTooLarge { .. }
            | Error::NonMonotoneTable { .. } => ErrorKind::Domain,
            Error::Evaluation { .. }
            | Error::SingularEvaluation(_)
            | Error::Pole(_)
            | Error::NumericalInstability { .. }
            | Error::Quadrature { .. } => ErrorKind::Numerical,
            Error::AtTime { source, .. } => source.kind(),
        }
    }

    pub(crate) fn at_time(self, t: f64) -> Self {
        Error::AtTime {
            t,
            source: Box::new(self),
        }
    }
}
