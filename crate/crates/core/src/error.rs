use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid scenario parameters: {0}")]
    InvalidScenarioParams(String),
    #[error("shape level {0} outside (0, 1]")]
    InvalidLevel(f64),
    #[error("invalid tail exponent {0}")]
    InvalidExponent(f64),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("quadrature did not converge (best estimate {value}, error estimate {abs_error})")]
    NonConvergence { value: f64, abs_error: f64 },
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    #[error("closed forms exist only for path-loss exponents 2 and 4, got {0}")]
    UnsupportedAlpha(f64),
    #[error("operation requires fading law {0}")]
    UnsupportedFading(&'static str),
    #[error("operation requires c = 0, got {0}")]
    RequiresZeroC(f64),
    #[error("denominator {0} is zero within tolerance")]
    DegenerateDenominator(f64),
    #[error("receiver offset {0} is not interior to the region")]
    OutsideRegion(f64),
    #[error("no finite truncation radius: {0}")]
    NoFiniteTruncation(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// True for errors signalling an almost-surely infinite or otherwise divergent regime.
    pub fn is_divergent(&self) -> bool {
        matches!(self, Error::DivergentIntegral(_) | Error::NoFiniteTruncation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
