//! Spectral pipeline: exact diagonalization, Q-fit, Newton refinement of the
//! Bethe equations, canonical roots and Bethe-state certification.

mod fit;
mod pipeline;
mod spectrum;

pub use fit::{canonicalize_roots, fit_q_from_lambda, fit_q_from_samples, fit_sample_points, newton_refine};
pub use pipeline::{
    certify_states, homogeneous_ladder, multiset_distance, roundtrip_points, solve_all, state_report, BijectionCheck,
    HomogeneousLadder, LadderRung, SolveFailure, SolveOutcome, StateCertificate, LADDER_EXPONENTS, LADDER_OFFSETS,
    ROUNDTRIP_POINTS, SOLVE_MAX_SITES,
};
pub use spectrum::{spectrum_ed, SpectrumEntry, ED_MAX_SITES, LAMBDA_PROBES};
