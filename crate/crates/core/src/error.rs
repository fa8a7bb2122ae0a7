use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not unitary (‖UU† − I‖_F = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not Hermitian (‖H − H†‖_F = {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not a density matrix: {0}")]
    NotDensity(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {dim} exceeds the resource guard ({max})")]
    ResourceGuard { dim: usize, max: usize },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("imaginary residue {residue:.3e} above tolerance")]
    ImaginaryResidue { residue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("eigendecomposition did not converge")]
    NoConvergence,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
