use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use xxz_core::gauge::{select_gauge_left, select_gauge_right};
use xxz_core::model::{transfer_matrix, ModelParams};
use xxz_core::Complex64;

fn demo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("demo.json")
}

fn xxz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxz"))
        .args(args)
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn xxz")
}

fn run_in(dir: &Path, cmd: &str, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", config.to_str().unwrap(), "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    xxz(&args)
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

fn complex(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn write_config(dir: &Path, json: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, json).unwrap();
    path
}

#[test]
fn demo_run_passes_every_suite() {
    let out = TempDir::new().unwrap();
    let o = run_in(out.path(), "run", &demo(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(out.path());
    assert_eq!(r["pass"], true);
    assert_eq!(r["run"]["seed"], 7);
    let suites = r["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 11);
    for s in suites {
        for c in s["checks"].as_array().unwrap() {
            assert!(!c["anchor"].as_str().unwrap().is_empty());
            let (res, scale, tol) = (
                c["residual"].as_f64().unwrap(),
                c["scale"].as_f64().unwrap(),
                c["tolerance"].as_f64().unwrap(),
            );
            let bound = if scale > 0.0 { tol * scale } else { tol };
            assert_eq!(c["pass"].as_bool().unwrap(), res <= bound, "{}", c["name"]);
        }
    }

    let eig = r["eigenvalues"].as_array().unwrap();
    assert_eq!(eig.len(), 4);
    for e in eig {
        assert_eq!(e["lambda_probes"].as_array().unwrap().len(), 5);
        assert!(e["eigen_residual"].as_f64().unwrap() < 1e-8);
        assert!(e["collinearity_defect"].as_f64().unwrap() < 1e-8);
    }

    let csv = std::fs::read_to_string(out.path().join("roots.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("eigenvalue_index,root_index,re,im,bae_residual"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let bae: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(bae < 1e-8);
    }
}

#[test]
fn reports_are_reproducible() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    assert_eq!(run_in(a.path(), "run", &demo(), &[]).status.code(), Some(0));
    assert_eq!(run_in(b.path(), "run", &demo(), &[]).status.code(), Some(0));
    for f in ["report.json", "roots.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn seed_override_changes_the_draw() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    run_in(a.path(), "spectrum", &demo(), &[]);
    run_in(b.path(), "spectrum", &demo(), &["--seed", "8"]);
    let (ra, rb) = (report(a.path()), report(b.path()));
    assert_eq!(rb["run"]["seed"], 8);
    assert_ne!(ra["run"]["parameters"], rb["run"]["parameters"]);
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), "run", &dir.path().join("absent.json"), &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn malformed_configs_are_config_errors() {
    let dir = TempDir::new().unwrap();
    for bad in [
        "{ not json",
        r#"{"model": {"draw": {"n_sites": 2, "seed": 1}}, "suites": ["bogus"]}"#,
        r#"{"model": {"draw": {"n_sites": 2, "seed": 1}}, "probe_count": 0}"#,
        r#"{"model": {"draw": {"n_sites": 2}}}"#,
        r#"{"model": {"draw": {"n_sites": 2, "seed": 1}}, "tolerances": {"solve": -1.0}}"#,
    ] {
        let cfg = write_config(dir.path(), bad);
        let o = run_in(dir.path(), "run", &cfg, &[]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn oversized_chain_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), r#"{"model": {"draw": {"n_sites": 9, "seed": 1}}}"#);
    let o = run_in(dir.path(), "run", &cfg, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N exceeds certified limit"));

    let cfg = write_config(dir.path(), r#"{"model": {"draw": {"n_sites": 4, "seed": 1}}}"#);
    let o = run_in(dir.path(), "verify", &cfg, &["--suite", "actions"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("N exceeds certified limit"));
}

#[test]
fn coinciding_inhomogeneities_exit_non_generic() {
    let dir = TempDir::new().unwrap();
    let r = {
        run_in(dir.path(), "spectrum", &demo(), &[]);
        report(dir.path())
    };
    let mut p: ModelParams = serde_json::from_value(r["run"]["parameters"].clone()).unwrap();
    p.inhomogeneities[1] = p.inhomogeneities[0] + p.eta;
    let cfg = write_config(
        dir.path(),
        &serde_json::json!({ "model": { "params": p }, "seed": 1 }).to_string(),
    );
    let o = run_in(dir.path(), "solve", &cfg, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("re-seed"));

    // The spectrum alone does not need distinct inhomogeneities.
    assert_eq!(run_in(dir.path(), "spectrum", &cfg, &[]).status.code(), Some(0));
}

#[test]
fn branches_lists_four_and_the_first_is_the_selected_gauge() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), "branches", &demo(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("branch ")).count(), 4);

    let r = report(dir.path());
    let p: ModelParams = serde_json::from_value(r["run"]["parameters"].clone()).unwrap();
    let b = r["branches"].as_array().unwrap();
    assert_eq!(b.len(), 4);
    assert_eq!(b[0]["branch"], 1);
    let gl = select_gauge_left(&p).unwrap();
    let (sum, gr) = select_gauge_right(&p).unwrap();
    assert!((complex(&b[0]["left"]["alpha"]) - gl.alpha).norm() < 1e-14);
    assert!((complex(&b[0]["left"]["m"]) - gl.m).norm() < 1e-14);
    assert!((complex(&b[0]["right_sum"]) - sum).norm() < 1e-14);
    assert!((complex(&b[0]["right_index"]["m"]) - gr.m).norm() < 1e-14);
    for row in b {
        for r in row["left_condition_residuals"].as_array().unwrap() {
            assert!(r.as_f64().unwrap() < 1e-12);
        }
        assert!(row["right_condition_residual"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn single_site_spectrum_matches_two_by_two_diagonalization() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), r#"{"model": {"draw": {"n_sites": 1, "seed": 3}}}"#);
    let o = run_in(dir.path(), "spectrum", &cfg, &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    let p: ModelParams = serde_json::from_value(r["run"]["parameters"].clone()).unwrap();
    let eig = r["eigenvalues"].as_array().unwrap();
    assert_eq!(eig.len(), 2);

    let probe = &eig[0]["lambda_probes"][0];
    let u0 = complex(&probe[0]);
    let t = transfer_matrix(u0, &p).unwrap();
    let (a, b, c, d) = (t[(0, 0)], t[(0, 1)], t[(1, 0)], t[(1, 1)]);
    let half = (a + d) * 0.5;
    let disc = (half * half - (a * d - b * c)).sqrt();
    let exact = [half + disc, half - disc];
    let got: Vec<Complex64> = eig.iter().map(|e| complex(&e["lambda_probes"][0][1])).collect();
    let scale = exact[0].norm().max(exact[1].norm());
    for x in exact {
        let best = got.iter().map(|g| (g - x).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-12 * scale, "{x} not in {got:?}");
    }
    assert!((got[0] - got[1]).norm() > 1e-6 * scale);
}

#[test]
fn verify_intertwining_alone() {
    let dir = TempDir::new().unwrap();
    let o = xxz(&["verify", "--suite", "intertwining", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path());
    let suites = r["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["suite"], "intertwining");
    assert_eq!(suites[0]["checks"].as_array().unwrap().len(), 31);
    assert!(!dir.path().join("roots.csv").exists());
}

#[test]
fn verify_rejects_pipeline_suites_and_fixed_commands_reject_suite() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), "verify", &demo(), &["--suite", "solve"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_in(dir.path(), "spectrum", &demo(), &["--suite", "actions"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"model": {"draw": {"n_sites": 2, "seed": 7}}, "tolerances": {"bae": 0.0}}"#,
    );
    let o = run_in(dir.path(), "solve", &cfg, &[]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(dir.path());
    assert_eq!(r["pass"], false);
    let solve = &r["suites"][1];
    assert_eq!(solve["pass"], false);
    for c in solve["checks"].as_array().unwrap() {
        let name = c["name"].as_str().unwrap();
        assert_eq!(c["pass"], !name.starts_with("bae"), "{name}");
    }
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL bae[0]"));
}

#[test]
fn state_certifies_every_solution() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), r#"{"model": {"draw": {"n_sites": 3, "seed": 11}}}"#);
    let o = run_in(dir.path(), "state", &cfg, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(dir.path());
    let names: Vec<&str> = r["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["spectrum", "solve", "certify"]);
    assert_eq!(r["eigenvalues"].as_array().unwrap().len(), 8);
    assert_eq!(r["suites"][2]["checks"].as_array().unwrap().len(), 16);
}
