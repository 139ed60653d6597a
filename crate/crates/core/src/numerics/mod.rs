//! Dense complex linear algebra used by every other module.

mod eigen;
mod lstsq;
mod matrix;
mod poly;

pub use eigen::{eig_general, eig_general_with, EigenDecomposition};
pub use lstsq::{determinant, lstsq, lstsq_with, lu_solve, LstsqSolution};
pub use matrix::{bilinear, collinearity_defect, inner, kron_vec, vec_norm, ComplexMatrix};
pub use poly::{poly_eval, poly_from_roots, poly_roots, poly_roots_with};

/// Tolerances shared by the kernels. Every threshold is relative to a natural
/// scale (matrix norm, coefficient magnitude).
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSettings {
    /// QR sweeps allowed per deflated eigenvalue before giving up.
    pub qr_iterations_per_eigenvalue: usize,
    /// Eigenvalues closer than this times `||A||` are reported as a cluster.
    pub cluster_tolerance: f64,
    /// Relative size of the smallest triangular pivot below which a
    /// least-squares system counts as rank deficient.
    pub rank_tolerance: f64,
}

impl Default for NumericSettings {
    fn default() -> Self {
        NumericSettings {
            qr_iterations_per_eigenvalue: 60,
            cluster_tolerance: 1e-7,
            rank_tolerance: 1e-12,
        }
    }
}
