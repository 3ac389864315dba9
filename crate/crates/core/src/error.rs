use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` out of domain: {value}")]
    ParameterDomain { name: &'static str, value: f64 },

    #[error("duration must be positive, got {0}")]
    NonPositiveDuration(f64),

    #[error("exact jump records are only available for compound Poisson models")]
    UnsupportedExactness,

    #[error("operation not supported: {0}")]
    Unsupported(&'static str),

    #[error("integral diverges: {0}")]
    DivergentIntegral(&'static str),

    #[error("stick cutoff {0} exceeds 1, big sticks are not fully recorded")]
    InsufficientTruncation(f64),

    #[error("malformed path: {0}")]
    MalformedPath(&'static str),

    #[error("faces do not conserve the horizon: sum of lengths {total} vs T = {horizon}")]
    InconsistentFaces { total: f64, horizon: f64 },

    #[error("model is outside the regime of this statistic: {0}")]
    WrongRegime(&'static str),

    #[error("truncation level kappa = {0} leaves no variance at t = 1")]
    BadKappa(f64),

    #[error("samples too small for the asymptotic test: n = {n}, m = {m}, need at least {min}")]
    SampleSize { n: usize, m: usize, min: usize },

    #[error("tail window holds {0} points, need at least 50")]
    TailWindow(usize),

    #[error("case does not match the sign of the drift")]
    CaseMismatch,

    #[error("quadrature forms disagree: {definition} vs {layered}")]
    Quadrature { definition: f64, layered: f64 },

    #[error("need at least {min} replications, got {got}")]
    TooFewReplications { got: usize, min: usize },
}
