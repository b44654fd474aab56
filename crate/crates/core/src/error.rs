use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for {len} transmitters")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("Gram matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("eigensolver did not converge")]
    EigenNonConvergence,

    #[error("realization {draw}: {source}")]
    Realization {
        draw: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("non-finite capacity; the Gram matrix is malformed")]
    NonFiniteCapacity,

    #[error("series does not converge for rho = {rho} (requires rho <= 1)")]
    SeriesDivergent { rho: f64 },

    #[error("{requested} series terms requested but only {available} moments supplied")]
    NotEnoughMoments { requested: usize, available: usize },

    #[error("quadrature did not reach tolerance {tol:e} (last estimate error {estimate:e})")]
    QuadratureTolerance { tol: f64, estimate: f64 },
}
