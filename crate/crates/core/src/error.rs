use thiserror::Error;

/// Everything that can go wrong while building states or decomposing them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("oscillator index must be non-negative, got {0}")]
    NegativeIndex(i64),

    #[error("grid needs at least 2 nodes, got {0}")]
    GridTooSmall(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{what} is not normalized: |sum |c|^2 - 1| = {residual:.3e}")]
    NotNormalized { what: &'static str, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "squeezed vacuum tail {requested:.3e} unreachable within n_cap = {n_cap}; \
         achievable tail mass is {achievable:.3e}"
    )]
    TailUnreachable {
        requested: f64,
        achievable: f64,
        n_cap: usize,
    },

    #[error("operation requires a stationary (fixed photon number) state")]
    NotStationary,

    #[error("all projected coefficients vanish for N = {0}")]
    ZeroProjection(usize),

    #[error(
        "grid extent {actual:.4} does not cover the turning point of psi_{n_max}; \
         required extent is at least {required:.4}"
    )]
    GridTooNarrow {
        n_max: usize,
        required: f64,
        actual: f64,
    },

    #[error("singular value decomposition failed: {0}")]
    Decomposition(String),

    #[error("spectrum is empty or identically zero")]
    EmptySpectrum,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("malformed state spec: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
