//! Vertex-face gauge machinery: gauge vectors and matrices, intertwining
//! relations, gauged monodromies and boundary matrices, and the choice of
//! gauge parameters that diagonalizes `K^+` and triangularizes `K^-`.

mod intertwining;
mod operators;
mod select;
mod suites;
mod vectors;

pub use intertwining::{verify_intertwining, verify_intertwining_with, VectorFn, INTERTWINING_DRAWS};
pub use operators::{
    gauged_double_row_left, gauged_double_row_right, gauged_kminus_left, gauged_kminus_right, gauged_kplus_left,
    gauged_left_from, gauged_one_row, gauged_right_from, OneRowSide,
};
pub(crate) use operators::{kminus_left_entries, kminus_right_entries};
pub use select::{
    canonical_mod_2ipi, enumerate_gauge_branches, right_realization, select_gauge_left, select_gauge_right,
    BranchSigns, GaugeChoice,
};
pub use suites::{verify_commutation, verify_gauge_structure, verify_transfer_decomposition, OPERATOR_SUITE_DRAWS};
pub(crate) use vectors::{dot, gv};
pub use vectors::{gauge_matrix, gauge_vector, GaugeIndex, GaugeKind, GaugeMatrix, GaugeMatrixKind, Vec2, GAUGE_GUARD};
