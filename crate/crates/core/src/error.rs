use thiserror::Error;

/// Errors raised by the gate-construction and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("anisotropy k = {0} is outside the supported range [-7, 7]")]
    KOutOfRange(f64),

    #[error("generator is not Hermitian (max |H - H^dagger| = {0:e})")]
    NonHermitianInput(f64),

    #[error("operator is not unitary (max |U^dagger U - I| = {0:e})")]
    NonUnitaryInput(f64),

    #[error("time {t} lies outside the pulse window [0, {t1}]")]
    TimeOutOfRange { t: f64, t1: f64 },

    #[error("pulse area {area} differs from the required {expected} by more than {tol:e}")]
    AreaMismatch { area: f64, expected: f64, tol: f64 },

    #[error("adaptive quadrature did not reach tolerance {tol:e} on [{a}, {b}]")]
    QuadratureNonConvergence { a: f64, b: f64, tol: f64 },

    #[error("root bracket [{lo}, {hi}] does not contain a solution")]
    NoBracket { lo: f64, hi: f64 },

    #[error("invalid pulse profile: {0}")]
    InvalidProfile(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid propagation config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
