//! R-matrix, reflection matrices, monodromies, transfer matrix and Hamiltonian.

mod checks;
mod hamiltonian;
mod local;
mod monodromy;
mod params;

pub use checks::{
    double_row_reflection_residual, dual_reflection_residual, qybe_residual, reflection_residual,
    unitarity_residual,
};
pub use hamiltonian::{boundary_fields, hamiltonian_direct, hamiltonian_from_transfer, hamiltonian_from_transfer_fd};
pub use local::{
    embed_one_site, embed_two_site, k_matrix, k_matrix_derivative, k_minus, k_minus_array, k_minus_derivative_array,
    k_plus, k_plus_array, k_plus_derivative_array, mat2, r_matrix, r_matrix_derivative, Mat2, Mat4, SIGMA_X, SIGMA_Y,
    SIGMA_Z,
};
pub use monodromy::{
    double_row_monodromy, double_row_monodromy_with, one_row_monodromy, one_row_monodromy_with_derivative,
    transfer_matrix, transfer_matrix_with, transfer_matrix_with_derivative, AuxMonodromy, MAX_SITES,
};
pub use params::{DrawSpec, ModelParams};
pub(crate) use local::r_array;
