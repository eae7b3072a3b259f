use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermibundle")).args(args).output().expect("binary runs")
}

fn report(dir: &Path, experiment: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{experiment}.json"))).unwrap()).unwrap()
}

#[test]
fn unknown_experiment_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["no-such-thing", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown experiment"));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "experiment = holonomy-audit\nwidth = 3\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["--config", dir.path().join("missing").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn library_error_writes_a_failure_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    // more particles than sites
    fs::write(&cfg, "experiment = holonomy-audit\nsides = 2\nparticles = 3\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(dir.path(), "holonomy-audit");
    assert_eq!(r["passed"], Value::Bool(false));
    assert!(r["error"].is_string());
}

#[test]
fn holonomy_audit_matches_every_loop() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["holonomy-audit", "--out", dir.path().to_str().unwrap(), "--seed", "9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(dir.path(), "holonomy-audit");
    assert_eq!(r["experiment"], "holonomy-audit");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["config"]["seed"], 9);
    assert_eq!(r["config"]["sides"], serde_json::json!([3, 3]));
    assert_eq!(r["payload"]["loops"], 100);
    assert_eq!(r["payload"]["matching"], 100);
    // every recorded phase is ±1 and agrees with the permutation sign
    for rec in r["payload"]["records"].as_array().unwrap() {
        let sign = rec["sign"].as_f64().unwrap();
        assert!((rec["phase"][0].as_f64().unwrap() - sign).abs() <= 1e-12);
        assert!(rec["phase"][1].as_f64().unwrap().abs() <= 1e-12);
    }
}

#[test]
fn anyon_sweep_holonomy_column_is_e_to_i_beta() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["anyon-sweep", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(dir.path(), "anyon-sweep");
    assert!(r["files"].as_array().unwrap().iter().any(|f| f == "anyon_holonomy.csv"));
    let csv = fs::read_to_string(dir.path().join("anyon_holonomy.csv")).unwrap();
    let rows: Vec<Vec<f64>> =
        csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    for (i, row) in rows.iter().enumerate() {
        let beta = std::f64::consts::PI * i as f64 / 8.0;
        assert!((row[0] - beta).abs() < 1e-15);
        assert!((row[1] - beta.cos()).abs() <= 1e-12 && (row[2] - beta.sin()).abs() <= 1e-12);
    }
    let spectra = fs::read_to_string(dir.path().join("anyon_spectra.csv")).unwrap();
    assert_eq!(spectra.lines().next(), Some("beta,k,eigenvalue"));
}

#[test]
fn equivalence_on_four_by_four_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("eq.cfg");
    fs::write(&cfg, "# fermions on a 4x4 box\nexperiment = equivalence\nsides = 4,4\nparticles = 2\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let p = &report(dir.path(), "equivalence")["payload"];
    assert_eq!(p["dim"], 120);
    assert!(p["hamiltonian_residual"].as_f64().unwrap() <= 1e-10);
    assert!(p["max_cell_residual"].as_f64().unwrap() <= 1e-10);
    assert!(p["unitarity"].as_f64().unwrap() <= 1e-12);
    let csv = fs::read_to_string(dir.path().join("equivalence_spectra.csv")).unwrap();
    assert_eq!(csv.lines().count(), 121);
}

#[test]
fn reruns_give_identical_payloads_and_tables() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for experiment in ["equivalence", "bohm-run", "fock-demo"] {
        for dir in [&a, &b] {
            let out = run(&[experiment, "--out", dir.path().to_str().unwrap(), "--seed", "4"]);
            assert_eq!(out.status.code(), Some(0), "{experiment}");
        }
        let (ra, rb) = (report(a.path(), experiment), report(b.path(), experiment));
        assert_eq!(serde_json::to_string(&ra["payload"]).unwrap(), serde_json::to_string(&rb["payload"]).unwrap());
        for f in ra["files"].as_array().unwrap() {
            let name = f.as_str().unwrap();
            assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
        }
    }
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "experiment = bohm-ensemble\nsamples = 400\nseed = 3\ntol = 1e-7\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--seed", "8", "--tol", "1e-8"]);
    assert_ne!(out.status.code(), Some(2));
    let r = report(dir.path(), "bohm-ensemble");
    assert_eq!(r["config"]["seed"], 8);
    assert_eq!(r["config"]["tol"], 1e-8);
    assert_eq!(r["payload"]["report"]["samples"], 400);
    assert!(r["wall_time_seconds"].as_f64().unwrap() >= 0.0);
}
