use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fit::{fit_q_from_samples, fit_sample_points};
use super::spectrum::{spectrum_ed, SpectrumEntry, LAMBDA_PROBES};
use crate::bethe::{bethe_state, eigen_residual_with, StateVector};
use crate::error::{Error, Result};
use crate::functional::{c_const, lambda_tq, TQSolution};
use crate::model::{transfer_matrix, ModelParams};
use crate::numerics::ComplexMatrix;
use crate::report::Report;

/// Largest chain for which `solve_all` output is certified.
pub const SOLVE_MAX_SITES: usize = 4;
/// Fresh points for the `Lambda` round trip.
pub const ROUNDTRIP_POINTS: usize = 20;
const ROUNDTRIP_SEED: u64 = 0x51ab_7e11;
const AMBIGUITY: f64 = 1e-6;
const DUPLICATE: f64 = 1e-6;
const LADDER_SEPARATION: f64 = 1e3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveFailure {
    pub index: usize,
    pub message: String,
}

/// How the fitted solutions map onto the exact spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BijectionCheck {
    /// ED entry matched by the solution fitted from entry `i`.
    pub matches: Vec<Option<usize>>,
    /// Largest relative `Lambda` difference between a solution and its match.
    pub max_match_distance: f64,
    /// Smallest relative `Lambda` difference to the runner-up entry.
    pub min_runner_up_distance: f64,
    /// Smallest pairwise bottleneck distance between canonical root sets.
    pub min_multiset_distance: f64,
    /// Worst relative `Lambda` round-trip error per solution.
    pub roundtrip: Vec<f64>,
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    /// ED spectrum with `tq` filled where the fit succeeded.
    pub entries: Vec<SpectrumEntry>,
    pub failures: Vec<SolveFailure>,
    pub bijection: BijectionCheck,
}

impl SolveOutcome {
    pub fn solutions(&self) -> Vec<&TQSolution> {
        self.entries.iter().filter_map(|e| e.tq.as_ref()).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.failures.is_empty() && self.bijection.bijective
    }

    pub fn max_bae_residual(&self) -> f64 {
        self.solutions().iter().map(|t| t.max_bae_residual()).fold(0.0, f64::max)
    }

    pub fn max_roundtrip(&self) -> f64 {
        self.bijection.roundtrip.iter().cloned().fold(0.0, f64::max)
    }
}

/// Deterministic fresh points away from the sample line and the probes.
pub fn roundtrip_points() -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(ROUNDTRIP_SEED);
    (0..ROUNDTRIP_POINTS)
        .map(|_| Complex64::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)))
        .collect()
}

fn relative_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / y.norm().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

/// `min over permutations sigma of max_i |a_i - b_sigma(i)|`.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    fn go(a: &[Complex64], b: &[Complex64], used: &mut Vec<bool>, i: usize, cur: f64, best: &mut f64) {
        if cur >= *best {
            return;
        }
        if i == a.len() {
            *best = cur;
            return;
        }
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(a, b, used, i + 1, cur.max((a[i] - b[j]).norm()), best);
                used[j] = false;
            }
        }
    }
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut best = f64::INFINITY;
    go(a, b, &mut vec![false; b.len()], 0, 0.0, &mut best);
    if a.is_empty() {
        0.0
    } else {
        best
    }
}

/// Exact spectrum, a Q-fit for every eigenvalue and the certification that
/// the fitted solutions are in bijection with the spectrum.
pub fn solve_all(p: &ModelParams) -> Result<SolveOutcome> {
    p.validate()?;
    if p.n_sites > SOLVE_MAX_SITES {
        return Err(Error::Size(format!("solve_all is certified for N <= {SOLVE_MAX_SITES}")));
    }
    let c = c_const(p);
    if c.norm() <= 1e-10 {
        return Err(Error::DegenerateCase(c.norm()));
    }
    let mut entries = spectrum_ed(p)?;
    let samples = fit_sample_points(p.n_sites);
    let fresh = roundtrip_points();
    let t_samples: Vec<ComplexMatrix> = samples.iter().map(|&u| transfer_matrix(u, p)).collect::<Result<_>>()?;
    let t_fresh: Vec<ComplexMatrix> = fresh.iter().map(|&u| transfer_matrix(u, p)).collect::<Result<_>>()?;

    let fits: Vec<Result<TQSolution>> = entries
        .par_iter()
        .map(|e| {
            let tab: Vec<(Complex64, Complex64)> = samples
                .iter()
                .zip(&t_samples)
                .map(|(&u, t)| (u, e.lambda_from_transfer(t)))
                .collect();
            fit_q_from_samples(&tab, p)
        })
        .collect();
    let mut failures = Vec::new();
    for (i, (e, fit)) in entries.iter_mut().zip(fits).enumerate() {
        match fit {
            Ok(tq) => e.tq = Some(tq),
            Err(err) => failures.push(SolveFailure {
                index: i,
                message: err.to_string(),
            }),
        }
    }

    let mut matches = vec![None; entries.len()];
    let mut roundtrip = vec![f64::INFINITY; entries.len()];
    let mut max_match: f64 = 0.0;
    let mut min_runner_up = f64::INFINITY;
    for (i, e) in entries.iter().enumerate() {
        let Some(tq) = &e.tq else { continue };
        let predicted: Vec<Complex64> = LAMBDA_PROBES
            .iter()
            .map(|&u| lambda_tq(u, tq, p))
            .collect::<Result<_>>()?;
        let mut dist: Vec<(f64, usize)> = entries
            .iter()
            .enumerate()
            .map(|(k, other)| (relative_distance(&predicted, &other.lambda_probe_values), k))
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        if dist.len() > 1 {
            if dist[1].0 < AMBIGUITY {
                return Err(Error::NonGeneric(format!(
                    "solution {i} matches entries {} and {} within {:.1e}",
                    dist[0].1, dist[1].1, dist[1].0
                )));
            }
            min_runner_up = min_runner_up.min(dist[1].0);
        }
        matches[i] = Some(dist[0].1);
        max_match = max_match.max(dist[0].0);
        let exact: Vec<Complex64> = t_fresh.iter().map(|t| e.lambda_from_transfer(t)).collect();
        let fitted: Vec<Complex64> = fresh.iter().map(|&u| lambda_tq(u, tq, p)).collect::<Result<_>>()?;
        roundtrip[i] = relative_distance(&fitted, &exact);
    }

    let sols: Vec<(usize, &TQSolution)> = entries
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.tq.as_ref().map(|t| (i, t)))
        .collect();
    let mut min_multiset = f64::INFINITY;
    for a in 0..sols.len() {
        for b in a + 1..sols.len() {
            min_multiset = min_multiset.min(multiset_distance(&sols[a].1.roots, &sols[b].1.roots));
        }
    }
    let mut seen = vec![false; entries.len()];
    let mut bijective = failures.is_empty() && min_multiset > DUPLICATE;
    for (i, m) in matches.iter().enumerate() {
        match m {
            Some(k) if *k == i && !seen[*k] => seen[*k] = true,
            _ => bijective = false,
        }
    }
    Ok(SolveOutcome {
        entries,
        failures,
        bijection: BijectionCheck {
            matches,
            max_match_distance: max_match,
            min_runner_up_distance: min_runner_up,
            min_multiset_distance: min_multiset,
            roundtrip,
            bijective,
        },
    })
}

/// Per-solution Bethe-state certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateCertificate {
    pub index: usize,
    pub state: StateVector,
    /// Against `Lambda` from the T-Q relation at [`LAMBDA_PROBES`].
    pub eigen_residual: f64,
    /// Against the ED eigenvector the solution was fitted from.
    pub collinearity_defect: f64,
}

/// Builds the Bethe state of every fitted solution and certifies it against
/// the transfer matrix and the exact eigenvector.
pub fn certify_states(p: &ModelParams, outcome: &SolveOutcome) -> Result<Vec<StateCertificate>> {
    let transfers: Vec<ComplexMatrix> = LAMBDA_PROBES
        .iter()
        .map(|&u| transfer_matrix(u, p))
        .collect::<Result<_>>()?;
    outcome
        .entries
        .par_iter()
        .enumerate()
        .filter_map(|(i, e)| e.tq.as_ref().map(|tq| (i, e, tq)))
        .map(|(i, e, tq)| {
            let state = bethe_state(tq, p)?;
            let mut worst: f64 = 0.0;
            for (t, &u) in transfers.iter().zip(&LAMBDA_PROBES) {
                worst = worst.max(eigen_residual_with(&state, t, lambda_tq(u, tq, p)?));
            }
            Ok(StateCertificate {
                index: i,
                collinearity_defect: state.collinearity_defect(&e.eigenvector),
                eigen_residual: worst,
                state,
            })
        })
        .collect()
}

/// Report form of [`certify_states`].
pub fn state_report(certs: &[StateCertificate]) -> Report {
    let mut r = Report::new();
    for c in certs {
        r.add(
            format!("bethe_state[{}].eigen", c.index),
            "|t(u)ψ - Λ(u)ψ| / (|ψ| |t(u)|) at the probe points",
            c.eigen_residual,
            1.0,
        );
        r.add(
            format!("bethe_state[{}].collinearity", c.index),
            "1 - |<ψ_ED, ψ>| / (|ψ_ED| |ψ|)",
            c.collinearity_defect,
            1.0,
        );
    }
    r
}

/// Offsets of the shrinking-inhomogeneity ladder.
pub const LADDER_OFFSETS: [f64; 8] = [0.7, -0.4, 0.25, -0.9, 0.55, -0.15, 0.85, -0.6];
pub const LADDER_EXPONENTS: [i32; 4] = [3, 4, 5, 6];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub exponent: i32,
    /// Bethe states indexed like the homogeneous ED spectrum.
    pub states: Vec<StateVector>,
    /// Collinearity defect of each state against the previous rung (0 on the first).
    pub successive_defects: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousLadder {
    pub rungs: Vec<LadderRung>,
    /// Eigen-residual of the last rung's states against the homogeneous `t(u)`.
    pub final_residuals: Vec<f64>,
}

impl HomogeneousLadder {
    pub fn max_final_residual(&self) -> f64 {
        self.final_residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// Successive defects of the last two rungs.
    pub fn last_step_defect(&self) -> f64 {
        self.rungs
            .last()
            .map(|r| r.successive_defects.iter().cloned().fold(0.0, f64::max))
            .unwrap_or(0.0)
    }

    /// Whether the successive defects decrease monotonically along the ladder.
    pub fn is_cauchy(&self) -> bool {
        let worst: Vec<f64> = self
            .rungs
            .iter()
            .skip(1)
            .map(|r| r.successive_defects.iter().cloned().fold(0.0, f64::max))
            .collect();
        worst.windows(2).all(|w| w[1] < w[0])
    }
}

/// Bethe states at `theta_j = 10^{-k} offset_j` for `k` in [`LADDER_EXPONENTS`],
/// compared with each other and with the `theta = 0` transfer matrix.
pub fn homogeneous_ladder(p: &ModelParams) -> Result<HomogeneousLadder> {
    let n = p.n_sites;
    if n > LADDER_OFFSETS.len() {
        return Err(Error::Size(format!("ladder offsets cover N <= {}", LADDER_OFFSETS.len())));
    }
    let zero = p.with_inhomogeneities(vec![Complex64::new(0.0, 0.0); n]);
    let base = spectrum_ed(&zero)?;
    let t0: Vec<ComplexMatrix> = LAMBDA_PROBES
        .iter()
        .map(|&u| transfer_matrix(u, &zero))
        .collect::<Result<_>>()?;
    let mut rungs: Vec<LadderRung> = Vec::new();
    for &k in &LADDER_EXPONENTS {
        let scale = 10f64.powi(-k);
        let pk = p.with_inhomogeneities(LADDER_OFFSETS[..n].iter().map(|&o| Complex64::new(o * scale, 0.0)).collect());
        let outcome = solve_all(&pk)?;
        if let Some(f) = outcome.failures.first() {
            return Err(Error::FitFailure(format!("ladder rung 1e-{k}, entry {}: {}", f.index, f.message)));
        }
        let mut states: Vec<Option<StateVector>> = vec![None; base.len()];
        for e in &outcome.entries {
            let tq = e.tq.as_ref().expect("no failures");
            let predicted: Vec<Complex64> = LAMBDA_PROBES
                .iter()
                .map(|&u| lambda_tq(u, tq, &pk))
                .collect::<Result<_>>()?;
            // Lambda moves by O(theta^2) along the ladder, so match by a clear
            // nearest neighbour instead of the fixed ambiguity threshold.
            let mut dist: Vec<(f64, usize)> = base
                .iter()
                .enumerate()
                .map(|(i, b)| (relative_distance(&predicted, &b.lambda_probe_values), i))
                .collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (d, idx) = dist[0];
            let runner_up = dist.get(1).map_or(f64::INFINITY, |x| x.0);
            if states[idx].is_some() || runner_up < LADDER_SEPARATION * d {
                return Err(Error::NonGeneric(format!(
                    "ladder rung 1e-{k}: cannot match solution to the homogeneous spectrum ({d:.1e} vs {runner_up:.1e})"
                )));
            }
            states[idx] = Some(bethe_state(tq, &pk)?);
        }
        let states: Vec<StateVector> = states.into_iter().map(|s| s.expect("bijective match")).collect();
        let successive_defects = match rungs.last() {
            Some(prev) => states
                .iter()
                .zip(&prev.states)
                .map(|(a, b)| a.collinearity_defect(b))
                .collect(),
            None => vec![0.0; states.len()],
        };
        rungs.push(LadderRung {
            exponent: k,
            states,
            successive_defects,
        });
    }
    let last = rungs.last().expect("ladder has rungs");
    let final_residuals = last
        .states
        .iter()
        .zip(&base)
        .map(|(s, b)| {
            t0.iter()
                .zip(&b.lambda_probe_values)
                .map(|(t, &l)| eigen_residual_with(s, t, l))
                .fold(0.0, f64::max)
        })
        .collect();
    Ok(HomogeneousLadder { rungs, final_residuals })
}
