use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cells must be square: Lx/nx = {hx}, Ly/ny = {hy}")]
    NonSquareCells { hx: f64, hy: f64 },

    #[error("invalid mesh size {nx}x{ny}: need at least 2 cells per direction")]
    InvalidSize { nx: usize, ny: usize },

    #[error("invalid domain length {0}")]
    InvalidLength(f64),

    #[error("cell index {index} out of range for {len} cells")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("fields live on different meshes")]
    MeshMismatch,

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("solver failed at step {step}: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("sample time {0} is not a multiple of the time step")]
    SampleTimeUnreachable(f64),

    #[error("interface thickness {eps} is not resolvable at h = {h} (need eps > 2h)")]
    UnresolvableInterface { eps: f64, h: f64 },

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("non-finite value in solution at step {step}")]
    NonFinite { step: usize },

    #[error("I/O failure on {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed data: {0}")]
    Format(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to usage or I/O).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. } | Error::NonFinite { .. } => true,
            Error::StepFailed { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::IoFailure {
            path: path.into(),
            source,
        }
    }
}
