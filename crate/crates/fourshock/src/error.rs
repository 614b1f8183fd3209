use thiserror::Error;

/// Errors surfaced by the solvers in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("adiabatic exponent must satisfy gamma >= 1, got {0}")]
    InvalidGamma(f64),

    #[error("{0}")]
    ParameterDomain(String),

    #[error("vacuum exceeded: Bernoulli argument {base:.6e} is negative")]
    VacuumExceeded { base: f64 },

    #[error("ell diverges: gamma = 1 with a vacuum argument")]
    DivergentEll,

    #[error("incident angle {theta:.12} is at or beyond the vacuum critical angle {theta_cr:.12}")]
    Vacuum { theta: f64, theta_cr: f64 },

    #[error("upstream state is not supersonic: M = {0:.12}")]
    SubsonicUpstream(f64),

    #[error("no regular reflection: incident angle {theta:.12} is at or beyond the detachment angle")]
    Detachment { theta: f64 },

    #[error("root finding failed: {0}")]
    RootFind(String),

    #[error("simulation aborted: {0}")]
    SimulationAbort(String),

    #[error("shock detection failed: {0}")]
    DetectionFailed(String),

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
