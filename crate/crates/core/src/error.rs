use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dense backend cap exceeded: {sites} sites requested, cap is {cap}")]
    ResourceCap { sites: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("no n up to {cap} reaches error {epsilon:e} (last error {last_error:e})")]
    SearchCapExceeded {
        cap: usize,
        epsilon: f64,
        last_error: f64,
    },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
