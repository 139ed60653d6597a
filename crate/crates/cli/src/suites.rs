//! Suite execution in dependency order.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use xxz_core::bethe::{reference_conditions_check, scalar_product_check, verify_left_actions, verify_right_actions};
use xxz_core::functional::verify_operator_identities;
use xxz_core::gauge::{verify_commutation, verify_gauge_structure, verify_intertwining, verify_transfer_decomposition};
use xxz_core::model::{hamiltonian_direct, hamiltonian_from_transfer, transfer_matrix, ModelParams};
use xxz_core::solver::{certify_states, solve_all, spectrum_ed, state_report, SolveOutcome, SpectrumEntry, StateCertificate};
use xxz_core::{Check, Complex64, ComplexMatrix, Report, Result};

use crate::config::{Resolved, Suite};
use crate::failure::Failure;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRecord {
    pub suite: Suite,
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Everything known about one eigenvalue of the transfer matrix.
#[derive(Clone, Debug, Serialize)]
pub struct EigenRecord {
    pub index: usize,
    /// `(u, Lambda(u))` pairs.
    pub lambda_probes: Vec<(Complex64, Complex64)>,
    pub ed_eigen_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Complex64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bae_residuals: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigen_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub collinearity_defect: Option<f64>,
}

#[derive(Debug, Default)]
pub struct Execution {
    pub suites: Vec<SuiteRecord>,
    pub eigenvalues: Vec<EigenRecord>,
}

impl Execution {
    pub fn pass(&self) -> bool {
        self.suites.iter().all(|s| s.pass)
    }
}

/// Deterministic spectral-parameter points for the per-eigenvalue records.
pub fn probe_points(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let x = (k as f64 + 0.5) / count as f64;
            Complex64::new(-0.8 + 1.6 * x, 0.25 * (1.7 * k as f64).cos())
        })
        .collect()
}

fn hamiltonian_suite(p: &ModelParams) -> Result<Report> {
    let h = if p.is_homogeneous() {
        p.clone()
    } else {
        p.with_inhomogeneities(vec![Complex64::new(0.0, 0.0); p.n_sites])
    };
    let direct = hamiltonian_direct(&h)?;
    let from_t = hamiltonian_from_transfer(&h)?;
    let mut r = Report::new();
    r.add(
        "hamiltonian[homogeneous]",
        "H = sinh η t'(0) t(0)⁻¹ − (N cosh η + tanh η sinh η)",
        direct.max_abs_diff(&from_t),
        direct.max_abs(),
    );
    Ok(r)
}

fn spectrum_report(entries: &[SpectrumEntry]) -> Report {
    let mut r = Report::new();
    for (i, e) in entries.iter().enumerate() {
        r.add(
            format!("ed[{i}].eigen"),
            "|t(u)v − Λ(u)v| / (|v| |t(u)|) at the probe points",
            e.eigen_residual,
            1.0,
        );
    }
    r
}

fn solve_report(o: &SolveOutcome) -> Report {
    let mut r = Report::new();
    let solved: Vec<usize> = (0..o.entries.len()).filter(|&i| o.entries[i].tq.is_some()).collect();
    for (&i, rt) in solved.iter().zip(&o.bijection.roundtrip) {
        let tq = o.entries[i].tq.as_ref().expect("solved entry");
        r.add(format!("bae[{i}]"), "Bethe equations, relative to the largest term", tq.max_bae_residual(), 1.0);
        r.add(format!("roundtrip[{i}]"), "Λ from the T-Q relation vs exact Λ at fresh points", *rt, 1.0);
    }
    for f in &o.failures {
        log::warn!("eigenvalue {}: {}", f.index, f.message);
    }
    let missing = o.entries.len() - solved.len() + usize::from(!o.bijection.bijective);
    r.add(
        "completeness",
        "one T-Q solution per eigenvalue, matched bijectively",
        missing as f64,
        1.0,
    );
    r
}

fn scalar_product_report(p: &ModelParams, o: &SolveOutcome) -> Result<Report> {
    let per_entry: Vec<Report> = o
        .entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let mut out = Report::new();
            for x in scalar_product_check(&e.eigenvector, &|u| e.lambda(u, p), p)?.residuals {
                out.add(format!("eigenvector[{i}].{}", x.name), x.anchor, x.residual, x.scale);
            }
            if let Some(tq) = &e.tq {
                for x in reference_conditions_check(p, Some(&tq.roots))?.residuals {
                    out.add(format!("solution[{i}].{}", x.name), x.anchor, x.residual, x.scale);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut r = Report::new();
    for x in per_entry {
        r.extend(x);
    }
    Ok(r)
}

fn judge(suite: Suite, report: Report, run: &Resolved) -> SuiteRecord {
    let checks: Vec<Check> = report
        .residuals
        .iter()
        .map(|x| x.check(run.tolerance(suite, &x.name)))
        .collect();
    SuiteRecord {
        suite,
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

fn eigen_records(
    run: &Resolved,
    entries: &[SpectrumEntry],
    certs: Option<&[StateCertificate]>,
) -> Result<Vec<EigenRecord>> {
    let p = &run.parameters;
    let points = probe_points(run.probe_count);
    let transfers: Vec<ComplexMatrix> = points.par_iter().map(|&u| transfer_matrix(u, p)).collect::<Result<_>>()?;
    Ok(entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let cert = certs.and_then(|c| c.iter().find(|c| c.index == i));
            EigenRecord {
                index: i,
                lambda_probes: points
                    .iter()
                    .zip(&transfers)
                    .map(|(&u, t)| (u, e.lambda_from_transfer(t)))
                    .collect(),
                ed_eigen_residual: e.eigen_residual,
                roots: e.tq.as_ref().map(|t| t.roots.clone()),
                bae_residuals: e.tq.as_ref().map(|t| t.bae_residuals.clone()),
                eigen_residual: cert.map(|c| c.eigen_residual),
                collinearity_defect: cert.map(|c| c.collinearity_defect),
            }
        })
        .collect())
}

pub fn execute(run: &Resolved) -> std::result::Result<Execution, Failure> {
    let p = &run.parameters;
    let seed = run.seed;
    let mut exec = Execution::default();
    let mut entries: Option<Vec<SpectrumEntry>> = None;
    let mut outcome: Option<SolveOutcome> = None;
    let mut certs: Option<Vec<StateCertificate>> = None;

    for &suite in &run.suites {
        let start = Instant::now();
        let report = match suite {
            Suite::Hamiltonian => hamiltonian_suite(p)?,
            Suite::Identities => verify_operator_identities(p)?,
            Suite::Intertwining => verify_intertwining(p, seed),
            Suite::GaugeStructure => verify_gauge_structure(p)?,
            Suite::Commutation => verify_commutation(p, seed)?,
            Suite::TransferDecomposition => verify_transfer_decomposition(p, seed)?,
            Suite::Actions => {
                let mut r = verify_left_actions(p, seed)?;
                r.extend(verify_right_actions(p, seed)?);
                r
            }
            Suite::Spectrum => {
                let e = if run.suites.contains(&Suite::Solve) {
                    let o = solve_all(p)?;
                    let e = o.entries.clone();
                    outcome = Some(o);
                    e
                } else {
                    spectrum_ed(p)?
                };
                let r = spectrum_report(&e);
                entries = Some(e);
                r
            }
            Suite::Solve => solve_report(outcome.as_ref().ok_or_else(|| missing(suite))?),
            Suite::Certify => {
                let c = certify_states(p, outcome.as_ref().ok_or_else(|| missing(suite))?)?;
                let r = state_report(&c);
                certs = Some(c);
                r
            }
            Suite::ScalarProducts => scalar_product_report(p, outcome.as_ref().ok_or_else(|| missing(suite))?)?,
        };
        let record = judge(suite, report, run);
        log::info!(
            "suite {suite}: {} checks, pass {}, {:.2}s",
            record.checks.len(),
            record.pass,
            start.elapsed().as_secs_f64()
        );
        exec.suites.push(record);
    }

    if let Some(e) = &entries {
        exec.eigenvalues = eigen_records(run, e, certs.as_deref())?;
    }
    Ok(exec)
}

fn missing(suite: Suite) -> Failure {
    Failure::Internal(format!("suite {suite} ran before its prerequisites"))
}
