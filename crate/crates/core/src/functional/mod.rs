//! Scalar data of the spectrum: a, d, Abar, c, Q, the inhomogeneous T-Q
//! relation, Bethe equations and the transfer-matrix identity suite.

mod field;
mod identities;
mod tq;

pub use field::{Dual, Field};
pub use identities::{
    trig_polynomial_misfit, verify_operator_identities, verify_operator_identities_with, ASYMPTOTIC_PROBE,
    IDENTITY_PROBES, IDENTITY_SUITE_MAX_SITES,
};
pub(crate) use tq::bae_terms_g;
pub use tq::{
    a_func, abar_func, asymptotic_leading, bae_residual, bae_residual_relative, bae_residual_scaled, c_const, d_func,
    lambda_tq, q_func, q_func_x, t_half_period_scalar, t_zero_scalar, tq_terms, TQSolution, TqSource,
};
