//! `xxz`: verification suites, exact spectrum, Bethe roots and Bethe states
//! for the open XXZ chain with arbitrary boundary fields.

mod config;
mod failure;
mod output;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use xxz_core::gauge::enumerate_gauge_branches;

use config::{resolve, Overrides, Resolved, RunConfig, Suite};
use failure::Failure;
use output::BranchRecord;
use suites::Execution;

#[derive(Debug, Parser)]
#[command(name = "xxz", version, about = "Open XXZ chain: T-Q solutions, Bethe states and their verification")]
struct Cli {
    /// JSON run configuration. Without it a seeded two-site draw is used.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Overrides the seed of the draw and of the random probes.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for report.json and roots.csv.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Restrict run/verify to these suites (repeatable).
    #[arg(long = "suite", global = true, value_enum)]
    suites: Vec<Suite>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// All configured suites, from identities through scalar products
    Run,
    /// Identity, intertwining, commutation and action suites only
    Verify,
    /// Exact spectrum of the transfer matrix
    Spectrum,
    /// T-Q solutions for every eigenvalue, with the root table
    Solve,
    /// Construct and certify the Bethe state of every solution
    State,
    /// The four gauge branches
    Branches,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Verify => "verify",
            Command::Spectrum => "spectrum",
            Command::Solve => "solve",
            Command::State => "state",
            Command::Branches => "branches",
        }
    }

    /// Default suites, and whether the subcommand accepts others.
    fn suites(self) -> (&'static [Suite], bool) {
        match self {
            Command::Run => (&Suite::ALL, true),
            Command::Verify => (&Suite::VERIFY, true),
            Command::Spectrum => (&[Suite::Spectrum], false),
            Command::Solve => (&[Suite::Solve], false),
            Command::State => (&[Suite::Certify], false),
            Command::Branches => (&[], false),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("xxz: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool, Failure> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let (defaults, selectable) = cli.command.suites();
    if !selectable {
        if !cli.suites.is_empty() {
            return Err(Failure::Config("--suite applies only to run and verify".into()));
        }
        config.suites.clear();
    }
    let over = Overrides {
        seed: cli.seed,
        out: cli.out.clone(),
        suites: cli.suites.clone(),
    };
    if let Command::Verify = cli.command {
        let requested = if over.suites.is_empty() { &config.suites } else { &over.suites };
        if let Some(s) = requested.iter().find(|s| !Suite::VERIFY.contains(s)) {
            return Err(Failure::Config(format!("suite {s} is not a verification suite")));
        }
    }
    let run = resolve(&config, &over, defaults)?;

    let (exec, branches) = match cli.command {
        Command::Branches => (Execution::default(), branch_records(&run)),
        _ => (suites::execute(&run)?, Vec::new()),
    };
    print_summary(cli.command, &run, &exec, &branches);
    let written = output::write(cli.command.name(), &run, &exec, &branches)?;
    println!("report: {}", written.report.display());
    if let Some(roots) = written.roots {
        println!("roots: {}", roots.display());
    }
    Ok(exec.pass())
}

fn branch_records(run: &Resolved) -> Vec<BranchRecord> {
    let p = &run.parameters;
    enumerate_gauge_branches(p)
        .into_iter()
        .map(|choice| BranchRecord {
            right_index: choice.right_index(p.eta),
            left_condition_residuals: choice.left_condition_residuals(p),
            right_condition_residual: choice.right_condition_residual(p),
            choice,
        })
        .collect()
}

fn sign(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

fn print_summary(command: Command, run: &Resolved, exec: &Execution, branches: &[BranchRecord]) {
    println!("N = {}, seed {}", run.parameters.n_sites, run.seed);
    for b in branches {
        let c = &b.choice;
        let r = b.right_index;
        println!(
            "branch {}  signs ({}, {})  left alpha {:.12}  m {:.12}  right alpha {:.12}  m {:.12}",
            c.branch,
            sign(c.signs.plus),
            sign(c.signs.minus),
            c.left.alpha,
            c.left.m,
            r.alpha,
            r.m
        );
    }
    for s in &exec.suites {
        let worst = s
            .checks
            .iter()
            .map(|c| if c.scale > 0.0 { c.residual / c.scale } else { c.residual })
            .fold(0.0, f64::max);
        println!(
            "{:<24} {:>5} checks  worst {:.2e}  {}",
            s.suite.name(),
            s.checks.len(),
            worst,
            if s.pass { "PASS" } else { "FAIL" }
        );
        for c in s.checks.iter().filter(|c| !c.pass) {
            println!("  FAIL {}: {:.3e} / {:.3e} > {:.1e}", c.name, c.residual, c.scale, c.tolerance);
        }
    }
    if matches!(command, Command::Spectrum | Command::Solve | Command::State) {
        for e in &exec.eigenvalues {
            let (u, lam) = e.lambda_probes[0];
            let roots = e.roots.as_ref().map_or(0, Vec::len);
            println!("eigenvalue {:>3}  Lambda({u:.4}) = {lam:.12}  roots {roots}", e.index);
        }
    }
}
