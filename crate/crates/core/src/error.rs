use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong in the numerical pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("QR iteration did not converge for eigenvalue index {index}")]
    Convergence { index: usize },

    #[error("degenerate input: {0}")]
    Degeneracy(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ill-conditioned system: {0}")]
    Conditioning(String),

    #[error("singular parameter: {0}")]
    Singularity(String),

    #[error("size limit exceeded: {0}")]
    Size(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-generic parameters ({0}); perturb or re-draw the parameters")]
    NonGeneric(String),

    #[error("gauge singularity: {factor} vanishes")]
    GaugeSingularity { factor: String },

    #[error("evaluation at a Bethe root (pole of the T-Q relation)")]
    Pole,

    #[error("the constant c vanishes ({0:e}); the inhomogeneous T-Q pipeline does not apply")]
    DegenerateCase(f64),

    #[error("Q-fit failed: {0}")]
    FitFailure(String),

    #[error("Newton refinement failed to converge (best residual {residual:e})")]
    RefineFailure {
        best: Vec<Complex64>,
        residual: f64,
    },

    #[error("overlap with the reference left state is too small ({0:e})")]
    UninformativeOverlap(f64),

    #[error("constructed state has zero norm")]
    DegenerateState,
}

pub type Result<T> = std::result::Result<T, Error>;
