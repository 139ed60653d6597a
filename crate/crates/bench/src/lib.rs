//! Shared fixtures for the criterion benchmarks in `benches/`.

use xxz_core::model::{DrawSpec, ModelParams};

pub const FIXTURE_SEED: u64 = 4_242;

/// Seeded generic parameters for an `n`-site chain.
pub fn fixture(n: usize) -> ModelParams {
    DrawSpec::new(n, FIXTURE_SEED + n as u64)
        .draw()
        .expect("fixture draw")
        .0
}
