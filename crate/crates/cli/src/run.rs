//! Dispatch to the library's experiment runners and write the report files.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use fermibundle::experiments::{
    all_passed, anyon_sweep, bohm_ensemble, bohm_run, constructions_compare, d1_boundary, equivalence, failures,
    fock_demo, holonomy_audit, BohmConfig, Check, EquivalenceConfig,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;

/// A finished experiment: JSON payload, pass/fail checks and side files.
pub struct Outcome {
    pub payload: Value,
    pub checks: Vec<Check>,
    /// `(file name, contents)` written next to the report.
    pub files: Vec<(String, String)>,
}

#[derive(Debug)]
pub enum RunError {
    Library(fermibundle::Error),
    Io(PathBuf, io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Library(e) => write!(f, "{e}"),
            RunError::Io(p, e) => write!(f, "{}: {e}", p.display()),
        }
    }
}

impl From<fermibundle::Error> for RunError {
    fn from(e: fermibundle::Error) -> Self {
        RunError::Library(e)
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn strip(value: &mut Value, keys: &[&str]) {
    if let Value::Object(map) = value {
        for k in keys {
            map.remove(*k);
        }
    }
}

fn num(x: f64) -> String {
    format!("{x:.17e}")
}

fn column_csv(header: &[&str], columns: &[&[f64]]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    let rows = columns.iter().map(|c| c.len()).max().unwrap_or(0);
    for i in 0..rows {
        let cells: Vec<String> = columns.iter().map(|c| c.get(i).map_or(String::new(), |&x| num(x))).collect();
        let _ = writeln!(out, "{i},{}", cells.join(","));
    }
    out
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let params = cfg.params();
    let statistics = cfg.statistics().expect("resolved config");
    let potential = cfg.potential().expect("resolved config");
    let bohm = || BohmConfig {
        particles: cfg.particles,
        dim: cfg.dim,
        evolution: cfg.evolution().expect("resolved config"),
        t_end: cfg.t_end,
        tol: cfg.tol,
        seed: cfg.seed,
        params,
    };
    let outcome = match cfg.experiment.as_str() {
        "holonomy-audit" => {
            let r = holonomy_audit(&cfg.lattice()?, cfg.particles, cfg.loops, cfg.seed)?;
            Outcome { payload: to_value(&r), checks: r.checks, files: vec![] }
        }
        "constructions-compare" => {
            let r = constructions_compare(&cfg.lattice()?, cfg.particles)?;
            Outcome { payload: to_value(&r), checks: r.checks, files: vec![] }
        }
        "equivalence" => {
            let lattice = cfg.lattice()?;
            let eq = EquivalenceConfig { statistics, potential, params, seed: cfg.seed, probes: cfg.probes };
            let r = equivalence(&lattice, cfg.particles, &eq)?;
            let mut payload = to_value(&r);
            strip(&mut payload, &["bundle_spectrum", "subspace_spectrum", "elapsed_seconds"]);
            let csv = column_csv(&["k", "bundle", "subspace"], &[&r.bundle_spectrum, &r.subspace_spectrum]);
            Outcome { payload, checks: r.checks, files: vec![("equivalence_spectra.csv".into(), csv)] }
        }
        "anyon-sweep" => {
            let r = anyon_sweep(&cfg.lattice()?, cfg.particles, cfg.beta_count, &potential, &params)?;
            let mut payload = to_value(&r);
            strip(&mut payload, &["spectra"]);
            let mut holonomy = String::from("beta,holonomy_re,holonomy_im,expected_re,expected_im,residual\n");
            for ((&b, p), res) in r.betas.iter().zip(&r.exchange_phases).zip(&r.exchange_residuals) {
                let cells = [b, p[0], p[1], b.cos(), b.sin(), *res].map(num);
                let _ = writeln!(holonomy, "{}", cells.join(","));
            }
            let mut spectra = String::from("beta,k,eigenvalue\n");
            for (&b, spectrum) in r.betas.iter().zip(&r.spectra) {
                for (k, &e) in spectrum.iter().enumerate() {
                    let _ = writeln!(spectra, "{},{k},{}", num(b), num(e));
                }
            }
            Outcome {
                payload,
                checks: r.checks,
                files: vec![("anyon_holonomy.csv".into(), holonomy), ("anyon_spectra.csv".into(), spectra)],
            }
        }
        "d1-boundary" => {
            let lattice = cfg.lattice()?;
            if lattice.dim() != 1 {
                return Err(fermibundle::Error::Domain(format!("d1-boundary needs a line, got sides {:?}", cfg.sides)).into());
            }
            let r = d1_boundary(cfg.sides[0], cfg.particles, &potential, &params)?;
            let mut payload = to_value(&r);
            if let Some(report) = payload.get_mut("report") {
                strip(report, &["anti_spectrum", "sym_spectrum", "dirichlet_spectrum", "neumann_spectrum"]);
            }
            let b = &r.report;
            let csv = column_csv(
                &["k", "anti", "dirichlet", "sym", "neumann"],
                &[&b.anti_spectrum, &b.dirichlet_spectrum, &b.sym_spectrum, &b.neumann_spectrum],
            );
            Outcome { payload, checks: r.checks, files: vec![("d1_spectra.csv".into(), csv)] }
        }
        "bohm-run" => {
            let r = bohm_run(&bohm())?;
            let mut payload = to_value(&r);
            for key in ["trajectory", "permuted"] {
                if let Some(t) = payload.get_mut(key) {
                    strip(t, &["times", "configs"]);
                }
            }
            let files = vec![
                ("trajectory.csv".into(), r.trajectory.to_csv()),
                ("trajectory_permuted.csv".into(), r.permuted.to_csv()),
            ];
            Outcome { payload, checks: r.checks, files }
        }
        "bohm-ensemble" => {
            let r = bohm_ensemble(&bohm(), cfg.samples)?;
            Outcome { payload: to_value(&r), checks: r.checks, files: vec![] }
        }
        "fock-demo" => {
            let r = fock_demo(&cfg.lattice()?, cfg.n_max, statistics, cfg.seed)?;
            let mut payload = to_value(&r);
            strip(&mut payload, &["sectors"]);
            let sectors = serde_json::to_string(&r.sectors).expect("sectors serialize");
            Outcome { payload, checks: r.checks, files: vec![("fock_sectors.json".into(), sectors)] }
        }
        other => unreachable!("experiment {other} passed validation"),
    };
    Ok(outcome)
}

fn write(path: &Path, contents: &str) -> Result<(), RunError> {
    fs::write(path, contents).map_err(|e| RunError::Io(path.to_path_buf(), e))
}

/// Runs the experiment and writes `<out>/<experiment>.json` plus its tables.
/// Returns the report path and whether every check passed.
pub fn run(cfg: &RunConfig) -> Result<(PathBuf, bool), RunError> {
    fs::create_dir_all(&cfg.out).map_err(|e| RunError::Io(cfg.out.clone(), e))?;
    let start = Instant::now();
    let result = execute(cfg);
    let wall = start.elapsed().as_secs_f64();
    let report_path = cfg.out.join(format!("{}.json", cfg.experiment));
    let (report, passed) = match result {
        Ok(outcome) => {
            for (name, contents) in &outcome.files {
                write(&cfg.out.join(name), contents)?;
            }
            let passed = all_passed(&outcome.checks);
            for c in &outcome.checks {
                println!("{} {}: {:.3e} (limit {:.3e})", if c.passed { "ok  " } else { "FAIL" }, c.name, c.value, c.limit);
            }
            let files: Vec<&String> = outcome.files.iter().map(|(n, _)| n).collect();
            let report = json!({
                "experiment": cfg.experiment,
                "version": env!("CARGO_PKG_VERSION"),
                "config": cfg,
                "passed": passed,
                "failures": failures(&outcome.checks),
                "files": files,
                "payload": outcome.payload,
                "wall_time_seconds": wall,
            });
            (report, passed)
        }
        Err(RunError::Library(e)) => {
            eprintln!("error: {e}");
            let report = json!({
                "experiment": cfg.experiment,
                "version": env!("CARGO_PKG_VERSION"),
                "config": cfg,
                "passed": false,
                "error": e.to_string(),
                "payload": Value::Null,
                "wall_time_seconds": wall,
            });
            (report, false)
        }
        Err(e) => return Err(e),
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    write(&report_path, &text)?;
    Ok((report_path, passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ragged_columns_leave_blank_cells() {
        let csv = column_csv(&["k", "a", "b"], &[&[1.0, 2.0], &[3.0]]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,a,b");
        assert!(lines[2].ends_with(','));
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn strip_removes_keys() {
        let mut v = json!({"a": 1, "b": 2});
        strip(&mut v, &["a", "c"]);
        assert_eq!(v, json!({"b": 2}));
    }
}
