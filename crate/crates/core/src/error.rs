use num_complex::Complex64;
use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("order nu = {0} is below -1/2")]
    OrderOutOfRange(f64),

    #[error("angle theta = {0} is too close to a multiple of pi (|sin theta| < 1e-8) but not exactly on it")]
    DegenerateAngle(f64),

    #[error("kernel at theta = n*pi is the distribution delta(t - omega); no pointwise value or spectral path exists")]
    IdentityAngle,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Bessel evaluation J_{order}({x}) lost accuracy (estimate {estimate:e})")]
    AccuracyLoss { order: f64, x: f64, estimate: f64 },

    #[error("quadrature did not converge after {panels} panels (value {value}, error estimate {error_estimate:e})")]
    NoConvergence {
        value: Complex64,
        error_estimate: f64,
        panels: usize,
    },

    #[error("integrand tail is not decaying at truncation radius {radius} (last contribution {tail:e})")]
    TruncationFailure { radius: f64, tail: f64 },

    #[error("unsupported input family: {0}")]
    UnsupportedFamily(String),

    #[error("unsupported parameters: {0}")]
    ParameterUnsupported(String),

    #[error("growth fit unstable: max log residual {residual} exceeds {limit}")]
    FitUnstable { residual: f64, limit: f64 },

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("sequence value at index {index} is not positive ({value})")]
    NonPositiveSequence { index: usize, value: f64 },

    #[error("at omega = {omega}: {source}")]
    AtFrequency {
        omega: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("at nesting depth {depth}: {source}")]
    Nested {
        depth: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_frequency(self, omega: f64) -> Self {
        Error::AtFrequency {
            omega,
            source: Box::new(self),
        }
    }

    pub(crate) fn nested(self, depth: usize) -> Self {
        Error::Nested {
            depth,
            source: Box::new(self),
        }
    }

    /// Innermost error after unwrapping location context.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtFrequency { source, .. } | Error::Nested { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for quadrature non-convergence or truncation failure.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::NoConvergence { .. } | Error::TruncationFailure { .. } | Error::AccuracyLoss { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
