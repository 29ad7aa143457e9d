use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("nome {0} outside [0, 1 - 1e-12)")]
    NomeOutOfRange(f64),

    #[error("modulus {0} outside [0, 1)")]
    ModulusOutOfRange(f64),

    #[error("argument out of range: {0}")]
    ArgOutOfRange(String),

    #[error("non-finite value while evaluating {0}")]
    NonFinite(&'static str),

    #[error("theta_4 vanishes at the requested point")]
    PoleAtZero,

    #[error("characteristic pole: 1 + nu*t^2 vanishes on the integration range (nu = {0})")]
    CharacteristicPole(f64),

    #[error("imaginary argument {alpha} not below K'(k) = {kprime}")]
    ImagArgTooLarge { alpha: f64, kprime: f64 },

    #[error("the map z(u) has its pole at the requested point")]
    PoleAtAlpha,

    #[error("invalid geometry: {0}")]
    GeometryInvalid(String),

    #[error("eta = {eta} not below pi/2: outside the range of the rectangle map")]
    OutsideLemmaRange { eta: f64 },

    #[error("lambda^2 = {0} outside (0, 1)")]
    LambdaOutOfRange(f64),

    #[error("no sign change found while bracketing: {0}")]
    BracketFailure(String),

    #[error(
        "linear solve did not reach tolerance: residual {residual:e} after {iterations} iterations"
    )]
    SolveDiverged { residual: f64, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
