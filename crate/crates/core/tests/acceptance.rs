//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p fermibundle --test acceptance`.

use std::cell::OnceCell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use fermibundle::confspace::LatticeBox;
use fermibundle::experiments::{
    all_passed, anyon_sweep, bohm_ensemble, bohm_run, constructions_compare, d1_boundary, equivalence, failures,
    fock_demo, frame_audit, holonomy_audit, BohmConfig, Check, EquivalenceConfig, EquivalenceReport,
};
use fermibundle::fock::Statistics;
use fermibundle::potential::Potential;
use fermibundle::PhysicalParams;

type Outcome = Result<Vec<Check>, String>;

fn boxes() -> Vec<LatticeBox> {
    [&[3, 3][..], &[4, 4], &[3, 3, 3]].iter().map(|s| LatticeBox::open(s).unwrap()).collect()
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn tagged(tag: &str, checks: Vec<Check>) -> Vec<Check> {
    checks.into_iter().map(|c| Check { name: format!("{tag}: {}", c.name), ..c }).collect()
}

fn holonomy_law() -> Outcome {
    let start = Instant::now();
    let mut checks = Vec::new();
    for lat in boxes() {
        for n in [2, 3] {
            let audit = holonomy_audit(&lat, n, 100, 2024 + n as u64).map_err(err)?;
            let tag = format!("{:?} N={n} ({} odd loops)", lat.sides(), audit.odd_loops);
            checks.push(Check::at_least(format!("{tag}: odd loops present"), audit.odd_loops as f64, 1.0));
            checks.extend(tagged(&tag, audit.checks));
        }
    }
    checks.push(Check::at_most("runtime (s)", start.elapsed().as_secs_f64(), 10.0));
    Ok(checks)
}

fn construction_uniqueness() -> Outcome {
    let mut checks = Vec::new();
    for lat in boxes() {
        for n in [2, 3] {
            let r = constructions_compare(&lat, n).map_err(err)?;
            let expected = if lat.dim() % 2 == 1 { 6 } else { 3 };
            let tag = format!("{:?} N={n}", lat.sides());
            checks.push(Check::at_least(format!("{tag}: pairs compared"), r.comparisons.len() as f64, expected as f64));
            checks.extend(tagged(&tag, r.checks));
        }
    }
    Ok(checks)
}

fn pullback_and_frame() -> Outcome {
    let mut checks = Vec::new();
    // d = 1 is left out: there the ordered graph is disconnected
    for (lat, n) in boxes().into_iter().flat_map(|b| [(b.clone(), 2), (b, 3)]) {
        let a = frame_audit(&lat, n, Statistics::Fermi, 5, 7).map_err(err)?;
        let tag = format!("{:?} N={n}", lat.sides());
        checks.push(Check::holds(format!("{tag}: pullback trivializes"), a.trivial));
        checks.push(Check::at_most(format!("{tag}: frame sign law"), a.sign_residual, 0.0));
        checks.push(Check::at_most(format!("{tag}: antisymmetry scan"), a.scan_residual.unwrap_or(f64::NAN), 1e-12));
    }
    Ok(checks)
}

fn core_checks(r: &EquivalenceReport) -> Vec<Check> {
    let keep = ["unitarity of U", "U H U⁻¹ residual", "U Q(cell) U⁻¹ residual", "spectrum gap"];
    r.checks.iter().filter(|c| keep.contains(&c.name.as_str())).cloned().collect()
}

fn unitarity_and_conjugation(fermi: &Result<EquivalenceReport, String>) -> Outcome {
    let r = fermi.as_ref().map_err(Clone::clone)?;
    let mut checks = core_checks(r);
    checks.push(Check::at_least("dimension", r.dim as f64, 120.0));
    checks.push(Check::at_most("runtime (s)", r.elapsed_seconds, 60.0));
    Ok(checks)
}

fn bosonic_analog() -> Outcome {
    let lat = LatticeBox::open(&[4, 4]).unwrap();
    let r = equivalence(&lat, 2, &EquivalenceConfig::new(Statistics::Bose, &lat)).map_err(err)?;
    let mut checks = core_checks(&r);
    checks.push(Check::at_most("frame symmetry law", r.frame.sign_residual, 0.0));
    checks.push(Check::at_most("symmetry scan", r.frame.scan_residual.unwrap_or(f64::NAN), 1e-12));
    Ok(checks)
}

fn anyon_interpolation() -> Outcome {
    let lat = LatticeBox::open(&[3, 3]).unwrap();
    let params = PhysicalParams::default();
    let r = anyon_sweep(&lat, 2, 9, &Potential::OnSiteRandom { seed: 3, strength: 0.4 }, &params).map_err(err)?;
    println!(
        "    anyon sweep: empirical continuity constant C = {:.6}, bound {:.3}",
        r.empirical_constant, r.continuity_bound
    );
    let mut checks = r.checks;
    checks.push(Check::at_least("beta values", r.betas.len() as f64, 9.0));
    Ok(checks)
}

fn solver_soundness(fermi: &Result<EquivalenceReport, String>) -> Outcome {
    let r = fermi.as_ref().map_err(Clone::clone)?;
    Ok(vec![
        Check::holds("solver finds a witness", r.solver.recovered),
        Check::at_most("witness equals U up to one global phase", r.solver.global_phase_gap, 1e-9),
        Check::holds("scrambled counterexample refused", r.solver.scrambled_refused),
        Check::at_most("scrambled Hamiltonian is isospectral", r.solver.scrambled_spectrum_gap, 1e-9),
    ])
}

fn boundary_demo() -> Outcome {
    let run = d1_boundary(6, 2, &Potential::OnSiteRandom { seed: 11, strength: 0.5 }, &PhysicalParams::default())
        .map_err(err)?;
    Ok(run.checks)
}

fn bohmian_laws(fermi: &Result<EquivalenceReport, String>) -> Outcome {
    let mut checks = Vec::new();
    let run = bohm_run(&BohmConfig { particles: 3, dim: 2, seed: 5, ..BohmConfig::default() }).map_err(err)?;
    checks.extend(run.checks.into_iter().filter(|c| !c.name.starts_with("lattice")));
    let r = fermi.as_ref().map_err(Clone::clone)?;
    checks.push(Check::at_most("velocity form invariance under U", r.velocity_gap, 1e-12));
    let ensemble = bohm_ensemble(&BohmConfig { seed: 20, ..BohmConfig::default() }, 10_000).map_err(err)?;
    println!(
        "    ensemble: KS statistic {:.5}, p-value {:.4}, failures {}",
        ensemble.report.ks_statistic, ensemble.report.p_value, ensemble.report.failures
    );
    checks.extend(ensemble.checks);
    Ok(checks)
}

fn fock_sectors() -> Outcome {
    let lat = LatticeBox::open(&[3, 3]).unwrap();
    let mut checks = Vec::new();
    for (s, tag) in [(Statistics::Fermi, "fermi"), (Statistics::Bose, "bose")] {
        let r = fock_demo(&lat, 3, s, 31).map_err(err)?;
        checks.extend(tagged(tag, r.checks));
    }
    Ok(checks)
}

fn report(index: usize, title: &str, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(checks) if all_passed(&checks) => {
            println!("PASS {index:>2}. {title} ({} checks, {secs:.2} s)", checks.len());
            true
        }
        Ok(checks) => {
            println!("FAIL {index:>2}. {title} ({secs:.2} s)");
            for f in failures(&checks) {
                println!("    {f}");
            }
            false
        }
        Err(e) => {
            println!("FAIL {index:>2}. {title}: {e}");
            false
        }
    }
}

fn main() -> ExitCode {
    let lat = LatticeBox::open(&[4, 4]).unwrap();
    // shared by criteria 4, 7 and 9; computed on first use
    let cell = OnceCell::new();
    let fermi = || cell.get_or_init(|| equivalence(&lat, 2, &EquivalenceConfig::new(Statistics::Fermi, &lat)).map_err(err));
    let results = [
        report(1, "holonomy law of the fermionic bundle", holonomy_law),
        report(2, "uniqueness of the fermionic line bundle constructions", construction_uniqueness),
        report(3, "pullback triviality and frame sign law", pullback_and_frame),
        report(4, "unitarity and conjugation, 4x4 N=2", || unitarity_and_conjugation(fermi())),
        report(5, "bosonic analog, 4x4 N=2", bosonic_analog),
        report(6, "anyon interpolation", anyon_interpolation),
        report(7, "equivalence solver soundness", || solver_soundness(fermi())),
        report(8, "d=1 boundary spectra", boundary_demo),
        report(9, "Bohmian covariance, gauge invariance, equivariance", || bohmian_laws(fermi())),
        report(10, "Fock sectors, N_max=3 on 3x3", fock_sectors),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
