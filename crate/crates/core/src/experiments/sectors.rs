//! Variable particle number: sector norms, phase freedom and exchange symmetry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Check;
use crate::bundle::Section;
use crate::confspace::LatticeBox;
use crate::error::Result;
use crate::fock::{assemble_fock, build_gamma, export_sectors, fock_norm_sqr, SectorExport, SectorState, Statistics};
use crate::iso::exchange_residual;
use crate::linalg::{random_cvec, C64};
use crate::triple::Symmetry;

#[derive(Debug, Clone, Serialize)]
pub struct FockDemoReport {
    pub sides: Vec<usize>,
    pub n_max: usize,
    pub statistics: Statistics,
    pub sector_sizes: Vec<usize>,
    pub total_measure: f64,
    pub sector_norms: Vec<f64>,
    pub total_norm: f64,
    pub assembled_norm: f64,
    pub additivity_residual: f64,
    /// Largest change of `|f(q̂)|²` when every `θ_N` is redrawn.
    pub phase_density_residual: f64,
    pub symmetry_residuals: Vec<f64>,
    pub sectors: Vec<SectorExport>,
    pub checks: Vec<Check>,
}

/// A random normalized state over sectors `0..=n_max`, assembled twice with
/// independent phase choices.
pub fn fock_demo(lattice: &LatticeBox, n_max: usize, statistics: Statistics, seed: u64) -> Result<FockDemoReport> {
    let gamma = build_gamma(lattice, n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sections: Vec<Section> = gamma
        .sector_sizes()
        .iter()
        .map(|&s| Section::from_values(1, random_cvec(s, &mut rng)))
        .collect::<Result<_>>()?;
    let raw: f64 = sections.iter().enumerate().map(|(n, s)| s.norm_sqr(gamma.point_measure(n))).sum();
    for s in &mut sections {
        s.values /= C64::from(raw.sqrt());
    }
    let phases = |rng: &mut ChaCha8Rng| (0..=n_max).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    let state = SectorState::new(&gamma, sections.clone(), phases(&mut rng))?;
    let rephased = SectorState::new(&gamma, sections, phases(&mut rng))?;
    let out = assemble_fock(&gamma, &state, statistics)?;
    let out2 = assemble_fock(&gamma, &rephased, statistics)?;

    let sector_norms = state.sector_norms_sqr(&gamma);
    let total_norm = state.norm_sqr(&gamma);
    let assembled_norm = fock_norm_sqr(&gamma, &out);
    let additivity_residual =
        (sector_norms.iter().sum::<f64>() - total_norm).abs().max((assembled_norm - total_norm).abs());
    let phase_density_residual = out
        .iter()
        .zip(&out2)
        .flat_map(|(a, b)| a.values.iter().zip(b.values.iter()).map(|(x, y)| (x.norm_sqr() - y.norm_sqr()).abs()))
        .fold(0.0, f64::max);
    let symmetry = match statistics {
        Statistics::Fermi => Symmetry::Anti,
        Statistics::Bose => Symmetry::Sym,
    };
    let symmetry_residuals = out
        .iter()
        .enumerate()
        .map(|(n, f)| exchange_residual(gamma.sector(n).ordered(), f, symmetry))
        .collect::<Result<Vec<_>>>()?;
    let worst_symmetry = symmetry_residuals.iter().copied().fold(0.0, f64::max);
    let checks = vec![
        Check::at_most("sector norm additivity", additivity_residual, 1e-12),
        Check::at_most("densities independent of sector phases", phase_density_residual, 1e-12),
        Check::at_most("exchange symmetry of every sector", worst_symmetry, 1e-12),
    ];
    Ok(FockDemoReport {
        sides: lattice.sides().to_vec(),
        n_max,
        statistics,
        sector_sizes: gamma.sector_sizes(),
        total_measure: gamma.total_measure(),
        sector_norms,
        total_norm,
        assembled_norm,
        additivity_residual,
        phase_density_residual,
        symmetry_residuals,
        sectors: export_sectors(&out),
        checks,
    })
}
