//! Vacua, left basis covectors, action formulas, Bethe-state assembly and the
//! overlap identities that certify it.

mod actions;
mod construct;
mod state;
mod vacua;

pub use actions::{g0_function, g_function, verify_left_actions, verify_right_actions, ACTION_SUITE_MAX_SITES};
pub use construct::{bethe_state, bethe_state_from_roots, g0_product, reference_conditions_check, scalar_product_check};
pub(crate) use state::eigen_residual_with;
pub use state::{eigen_residual, CoStateVector, StateVector};
pub use vacua::{left_basis_state, left_vacuum, right_vacuum, subsets, vacuum_prefactor_product};
