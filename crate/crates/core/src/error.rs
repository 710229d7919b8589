use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time {t} lies outside the tabulated range [{min}, {max}]")]
    OutOfDomain { t: f64, min: f64, max: f64 },

    #[error("invalid mass profile: {0}")]
    InvalidProfile(String),

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("invariant cannot be diagonalized: {0}")]
    NonDiagonalizable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coefficient alpha(t) = {alpha} is not positive at t = {t}; sigma is not real")]
    SingularCoefficient { t: f64, alpha: f64 },

    #[error("inconsistent inputs: {0}")]
    Consistency(String),

    #[error("level n = {n} exceeds the configured cap {cap}")]
    LevelTooHigh { n: usize, cap: usize },

    #[error("wave packet is not normalizable (Re K = {0})")]
    NotNormalizable(f64),

    #[error("boundary amplitude {amplitude:e} exceeds {limit:e} at t = {t}; enlarge the domain")]
    DomainTooSmall { t: f64, amplitude: f64, limit: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("wigner transform tail estimate {0:e} too large even after widening the domain")]
    TailTruncation(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
