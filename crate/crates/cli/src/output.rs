//! JSON report and CSV root table.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use xxz_core::gauge::{GaugeChoice, GaugeIndex};

use crate::config::Resolved;
use crate::failure::Failure;
use crate::suites::{EigenRecord, Execution, SuiteRecord};

#[derive(Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
    pub core_version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Tool {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            core_version: xxz_core::VERSION,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BranchRecord {
    #[serde(flatten)]
    pub choice: GaugeChoice,
    pub right_index: GaugeIndex,
    pub left_condition_residuals: [f64; 2],
    pub right_condition_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport<'a> {
    pub tool: Tool,
    pub command: &'a str,
    pub run: &'a Resolved,
    pub pass: bool,
    pub suites: &'a [SuiteRecord],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    pub eigenvalues: &'a [EigenRecord],
    #[serde(skip_serializing_if = "<[_]>::is_empty")]
    pub branches: &'a [BranchRecord],
}

#[derive(Debug, Serialize)]
struct RootRow {
    eigenvalue_index: usize,
    root_index: usize,
    re: f64,
    im: f64,
    bae_residual: f64,
}

pub struct Written {
    pub report: PathBuf,
    pub roots: Option<PathBuf>,
}

pub fn write(
    command: &str,
    run: &Resolved,
    exec: &Execution,
    branches: &[BranchRecord],
) -> Result<Written, Failure> {
    let dir = &run.output_path;
    fs::create_dir_all(dir)
        .map_err(|e| Failure::Config(format!("cannot create output directory {}: {e}", dir.display())))?;
    let report = RunReport {
        tool: Tool::current(),
        command,
        run,
        pass: exec.pass(),
        suites: &exec.suites,
        eigenvalues: &exec.eigenvalues,
        branches,
    };
    let report_path = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Internal(e.to_string()))?;
    text.push('\n');
    fs::write(&report_path, text)?;

    let roots = if exec.eigenvalues.iter().any(|e| e.roots.is_some()) {
        let path = dir.join("roots.csv");
        write_roots(&path, &exec.eigenvalues)?;
        Some(path)
    } else {
        None
    };
    Ok(Written {
        report: report_path,
        roots,
    })
}

fn write_roots(path: &Path, eigenvalues: &[EigenRecord]) -> Result<(), Failure> {
    let csv_err = |e: csv::Error| Failure::Internal(format!("writing {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for e in eigenvalues {
        let (Some(roots), Some(bae)) = (&e.roots, &e.bae_residuals) else {
            continue;
        };
        for (k, (r, b)) in roots.iter().zip(bae).enumerate() {
            w.serialize(RootRow {
                eigenvalue_index: e.index,
                root_index: k,
                re: r.re,
                im: r.im,
                bae_residual: *b,
            })
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
