//! Bohmian experiments for Gaussian Slater determinants in continuous space.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Check;
use crate::bohm::{
    equivariance_test, integrate, lattice_velocity_error, project_trajectory, sample_configuration, EnsembleReport,
    Evolution, GaugeField, Orbital, ScalarField, SlaterState, Trajectory,
};
use crate::error::Result;
use crate::params::PhysicalParams;
use crate::perm::Permutation;

#[derive(Debug, Clone, Serialize)]
pub struct BohmConfig {
    pub particles: usize,
    pub dim: usize,
    pub evolution: Evolution,
    pub t_end: f64,
    pub tol: f64,
    pub seed: u64,
    pub params: PhysicalParams,
}

impl Default for BohmConfig {
    fn default() -> Self {
        Self {
            particles: 2,
            dim: 1,
            evolution: Evolution::Free,
            t_end: 1.0,
            tol: 1e-9,
            seed: 1,
            params: PhysicalParams::default(),
        }
    }
}

impl BohmConfig {
    pub fn state(&self) -> Result<SlaterState> {
        SlaterState::new(default_orbitals(self.particles, self.dim, self.evolution), self.params)
    }
}

/// Packets spread along axis 0 with alternating momenta, slightly displaced
/// on the other axes, widths growing with the index.
pub fn default_orbitals(particles: usize, dim: usize, evolution: Evolution) -> Vec<Orbital> {
    (0..particles)
        .map(|k| {
            let kf = k as f64;
            let mut center = vec![0.3 * kf; dim];
            center[0] = 1.5 * (kf - (particles as f64 - 1.0) / 2.0);
            let mut momentum = vec![0.2; dim];
            momentum[0] = if k % 2 == 0 { 0.5 } else { -0.5 };
            Orbital { center, momentum, width: vec![0.8 + 0.1 * kf; dim], evolution }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticePoint {
    pub spacing: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BohmRunReport {
    pub config: BohmConfig,
    pub initial: Vec<f64>,
    /// 1-based images of the relabeling applied to the second start.
    pub permutation: Vec<usize>,
    pub trajectory: Trajectory,
    pub permuted: Trajectory,
    /// `max_t |r̂_t − σ·q̂_t|`.
    pub covariance_deviation: f64,
    pub projection_deviation: f64,
    /// Single particle: `(A, ψ)` against `(A + ∇f, e^{if/ħ}ψ)`.
    pub gauge_deviation: f64,
    pub lattice: Vec<LatticePoint>,
    /// `log₂` of successive error ratios as the spacing halves.
    pub lattice_rates: Vec<f64>,
    pub checks: Vec<Check>,
}

/// Trajectories from `q̂₀` (drawn from `|ψ₀|²`) and from a relabeled `σ·q̂₀`,
/// plus a single-particle gauge pair and the lattice/continuum velocity comparison.
pub fn bohm_run(cfg: &BohmConfig) -> Result<BohmRunReport> {
    let state = cfg.state()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let q0 = sample_configuration(&state, &mut rng)?;
    let n = cfg.particles;
    let d = cfg.dim;
    let sigma = if n > 1 {
        loop {
            let s = Permutation::random(n, &mut rng);
            if !s.is_identity() {
                break s;
            }
        }
    } else {
        Permutation::identity(n)
    };
    let relabel = |q: &[f64]| -> Vec<f64> {
        sigma.zero_based().iter().flat_map(|&s| q[s * d..(s + 1) * d].to_vec()).collect()
    };
    let trajectory = integrate(&state, &q0, cfg.t_end, cfg.tol)?;
    let permuted = integrate(&state, &relabel(&q0), cfg.t_end, cfg.tol)?;
    let covariance_deviation = trajectory
        .configs
        .iter()
        .zip(&permuted.configs)
        .flat_map(|(q, r)| relabel(q).into_iter().zip(r.clone()).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    let projection_deviation = project_trajectory(&trajectory).max_deviation(&project_trajectory(&permuted));
    let complete = trajectory.is_complete()
        && permuted.is_complete()
        && trajectory.configs.len() == permuted.configs.len();

    let single = SlaterState::new(vec![state.orbitals[0].clone()], cfg.params)?;
    let gauge = GaugeField {
        potential: ScalarField::Sine { amplitude: 0.7, k: vec![1.3; d], phase: 0.4 },
        transform: ScalarField::Sum(vec![
            ScalarField::Linear { k: vec![1.1; d] },
            ScalarField::Quadratic { curvature: -0.6, center: vec![0.5; d] },
        ]),
    };
    let start: Vec<f64> = state.orbitals[0].center.iter().map(|c| c + 0.3).collect();
    let a = integrate(&single.clone().with_gauge(gauge.potential.clone())?, &start, cfg.t_end, cfg.tol)?;
    let b = integrate(&single.with_gauge(gauge.transformed())?, &start, cfg.t_end, cfg.tol)?;
    let gauge_deviation = if a.is_complete() && b.is_complete() { a.max_deviation(&b) } else { f64::INFINITY };

    let probe = Orbital::isotropic(vec![0.0], vec![0.8], 1.0, Evolution::Free)?;
    let lattice = [0.2, 0.1, 0.05]
        .iter()
        .map(|&spacing| Ok(LatticePoint { spacing, error: lattice_velocity_error(&probe, spacing, &cfg.params)? }))
        .collect::<Result<Vec<_>>>()?;
    let lattice_rates: Vec<f64> = lattice.windows(2).map(|w| (w[0].error / w[1].error).log2()).collect();
    let min_rate = lattice_rates.iter().copied().fold(f64::INFINITY, f64::min);

    let checks = vec![
        Check::holds("both labeled trajectories reach t_end", complete),
        Check::at_most("permutation covariance of trajectories", covariance_deviation, 1e-6),
        Check::at_most("projected trajectories coincide", projection_deviation, 1e-6),
        Check::at_most("gauge pair trajectories coincide", gauge_deviation, 1e-6),
        Check::at_least("lattice velocity convergence order", min_rate, 1.0),
    ];
    Ok(BohmRunReport {
        config: cfg.clone(),
        initial: q0,
        permutation: sigma.images(),
        trajectory,
        permuted,
        covariance_deviation,
        projection_deviation,
        gauge_deviation,
        lattice,
        lattice_rates,
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleRun {
    pub config: BohmConfig,
    pub report: EnsembleReport,
    pub checks: Vec<Check>,
}

/// Equivariance test at `cfg.t_end` with `samples` trajectories.
pub fn bohm_ensemble(cfg: &BohmConfig, samples: usize) -> Result<EnsembleRun> {
    let state = cfg.state()?;
    let report = equivariance_test(&state, samples, cfg.t_end, cfg.seed, cfg.tol)?;
    let checks = vec![
        Check::at_least("Kolmogorov–Smirnov p-value", report.p_value, 0.01),
        Check::holds("node failures within 1%", !report.degraded),
    ];
    Ok(EnsembleRun { config: cfg.clone(), report, checks })
}
