//! Born-rule equivariance check: sample `|ψ₀|²`, transport along trajectories,
//! compare against the exact marginal of `|ψ_t|²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::bohm::integrate::integrate_grid;
use crate::bohm::orbital::{Orbital, Quadratic};
use crate::bohm::slater::SlaterState;
use crate::confspace::{build_ordered_graph, LatticeBox};
use crate::error::{Error, Result};
use crate::linalg::{C64, CMat, CVec};
use crate::params::PhysicalParams;
use crate::triple::{make_ordered_triple, velocity_form};

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleReport {
    pub samples: usize,
    pub t: f64,
    pub seed: u64,
    /// Coordinate compared: axis `marked_axis` of particle `marked_particle` (0-based).
    pub marked_particle: usize,
    pub marked_axis: usize,
    pub ks_statistic: f64,
    pub p_value: f64,
    /// Trajectories that met a node before `t`.
    pub failures: usize,
    /// More than 1% of the trajectories failed.
    pub degraded: bool,
    pub acceptance_rate: f64,
}

/// Draws `samples` points from `|ψ₀|²`, integrates each to `t` and runs a
/// Kolmogorov–Smirnov test of particle 0's first coordinate against its exact
/// marginal at `t`. Sample `i` uses stream `i` of a ChaCha8 generator seeded
/// with `seed`, so the result does not depend on thread scheduling.
pub fn equivariance_test(state: &SlaterState, samples: usize, t: f64, seed: u64, tol: f64) -> Result<EnsembleReport> {
    if samples == 0 {
        return Err(Error::Domain("sample count must be positive".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    let bound = envelope_bound(state);
    let outcomes: Vec<(Option<f64>, usize)> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<(Option<f64>, usize)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let (q0, draws) = sample_initial(state, bound, &mut rng)?;
            if t == 0.0 {
                return Ok((Some(q0[0]), draws));
            }
            let tr = integrate_grid(state, &q0, &[0.0, t], tol);
            match tr {
                Ok(tr) if tr.is_complete() => Ok((Some(tr.last()[0]), draws)),
                Ok(_) | Err(Error::NodeGuard { .. }) => Ok((None, draws)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut values: Vec<f64> = outcomes.iter().filter_map(|o| o.0).collect();
    let failures = samples - values.len();
    let draws: usize = outcomes.iter().map(|o| o.1).sum();
    values.sort_by(f64::total_cmp);
    let cdf = marginal_cdf(state, t, 0)?;
    let n = values.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let f = cdf.eval(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(EnsembleReport {
        samples,
        t,
        seed,
        marked_particle: 0,
        marked_axis: 0,
        ks_statistic: d,
        p_value: kolmogorov_p_value(d, values.len()),
        failures,
        degraded: failures * 100 > samples,
        acceptance_rate: samples as f64 / draws as f64,
    })
}

/// One configuration drawn from `|ψ₀|²`.
pub fn sample_configuration<R: Rng + ?Sized>(state: &SlaterState, rng: &mut R) -> Result<Vec<f64>> {
    sample_initial(state, envelope_bound(state), rng).map(|(x, _)| x)
}

/// `M` with `|ψ₀|² ≤ M · ∏_j (1/N) Σ_k |φ_k(x_j)|²`, from Hadamard's inequality.
fn envelope_bound(state: &SlaterState) -> f64 {
    let n = state.particles();
    (n as f64).powi(n as i32) * state.normalization().powi(2)
}

/// Rejection sampling from the orbital mixture; returns the point and the number of proposals.
fn sample_initial<R: Rng + ?Sized>(state: &SlaterState, bound: f64, rng: &mut R) -> Result<(Vec<f64>, usize)> {
    let n = state.particles();
    let d = state.dim;
    let scale = (n as f64).powi(n as i32);
    for draws in 1..=1_000_000 {
        let mut x = Vec::with_capacity(n * d);
        for _ in 0..n {
            let o = &state.orbitals[rng.random_range(0..n)];
            for a in 0..d {
                x.push(o.center[a] + o.width[a] * rng.sample::<f64, _>(StandardNormal));
            }
        }
        let envelope: f64 = (0..n)
            .map(|j| {
                let xj = &x[j * d..(j + 1) * d];
                state.orbitals.iter().map(|o| o.value(xj, 0.0, &state.params).norm_sqr()).sum::<f64>()
            })
            .product::<f64>()
            / scale;
        let target = state.density(&x, 0.0)?;
        if rng.random::<f64>() * bound * envelope < target {
            return Ok((x, draws));
        }
    }
    Err(Error::Invariant("rejection sampler accepted nothing in 10⁶ proposals".into()))
}

/// Cumulative distribution of one coordinate of one particle under `|ψ_t|²`.
pub struct MarginalCdf {
    lo: f64,
    width: f64,
    cumulative: Vec<f64>,
    density: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    nodes: Vec<(f64, f64)>,
}

const CELLS: usize = 4000;

impl MarginalCdf {
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        let u = (x - self.lo) / self.width;
        let cell = u.floor() as usize;
        if cell >= CELLS {
            return 1.0;
        }
        let a = self.lo + cell as f64 * self.width;
        (self.cumulative[cell] + integrate_gl(&self.density, &self.nodes, a, x)).clamp(0.0, 1.0)
    }

    pub fn total(&self) -> f64 {
        self.cumulative[CELLS]
    }
}

/// Density of `x_{j,axis}`: `(1/N) Σ_kl (S⁻¹)_kl f_k(x) conj(f_l(x)) ∏_{b≠axis} ⟨f_l,b | f_k,b⟩`.
pub fn marginal_cdf(state: &SlaterState, t: f64, axis: usize) -> Result<MarginalCdf> {
    if axis >= state.dim {
        return Err(Error::Domain(format!("axis {axis} out of range for d = {}", state.dim)));
    }
    let n = state.particles();
    let factors: Vec<Vec<Quadratic>> = state.orbitals.iter().map(|o| o.factors(t, &state.params)).collect();
    let s_inv = state
        .overlap(t)
        .try_inverse()
        .ok_or_else(|| Error::Invariant("orbital overlap matrix is singular".into()))?;
    let mut coeffs = CMat::zeros(n, n);
    for k in 0..n {
        for l in 0..n {
            let other: C64 = (0..state.dim)
                .filter(|&b| b != axis)
                .map(|b| Quadratic::overlap(&factors[l][b], &factors[k][b]))
                .product();
            coeffs[(k, l)] = s_inv[(k, l)] * other / n as f64;
        }
    }
    let axis_factors: Vec<Quadratic> = factors.iter().map(|f| f[axis]).collect();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for q in &axis_factors {
        // |f|² ∝ exp(2 Re A x² + 2 Re B x)
        let mean = -q.b.re / (2.0 * q.a.re);
        let sd = (-1.0 / (4.0 * q.a.re)).sqrt();
        lo = lo.min(mean - 14.0 * sd);
        hi = hi.max(mean + 14.0 * sd);
    }
    let density = move |x: f64| {
        let f: Vec<C64> = axis_factors.iter().map(|q| q.value(x)).collect();
        let mut rho = C64::from(0.0);
        for k in 0..n {
            for l in 0..n {
                rho += coeffs[(k, l)] * f[k] * f[l].conj();
            }
        }
        rho.re
    };
    let nodes = gauss_legendre(10);
    let width = (hi - lo) / CELLS as f64;
    let mut cumulative = Vec::with_capacity(CELLS + 1);
    cumulative.push(0.0);
    let mut acc = 0.0;
    for c in 0..CELLS {
        let a = lo + c as f64 * width;
        acc += integrate_gl(&density, &nodes, a, a + width);
        cumulative.push(acc);
    }
    if (acc - 1.0).abs() > 1e-8 {
        return Err(Error::Invariant(format!("marginal density integrates to {acc}")));
    }
    Ok(MarginalCdf { lo, width, cumulative, density: Box::new(density), nodes })
}

fn integrate_gl(f: &dyn Fn(f64) -> f64, nodes: &[(f64, f64)], a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * nodes.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>()
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Asymptotic Kolmogorov tail with the Stephens small-sample correction.
fn kolmogorov_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)
}

/// `Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2j²λ²}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// `|v_lattice − p₀/m|` at the centre of a one-dimensional packet sampled on a
/// lattice of the given spacing; the lattice velocity comes from the discrete
/// current of the nearest-neighbour hopping Hamiltonian.
pub fn lattice_velocity_error(orbital: &Orbital, spacing: f64, params: &PhysicalParams) -> Result<f64> {
    if orbital.dim() != 1 {
        return Err(Error::Dimension("lattice velocity comparison is one-dimensional".into()));
    }
    let half = (14.0 * orbital.width[0] / spacing).ceil() as usize;
    let sites = 2 * half + 1;
    let lattice = LatticeBox::open(&[sites])?.with_spacing(spacing)?;
    let params = PhysicalParams { spacing, ..*params };
    let centred = Orbital { center: vec![half as f64 * spacing], ..orbital.clone() };
    let graph = build_ordered_graph(&lattice, 1)?;
    let triple = make_ordered_triple(&graph, &vec![0.0; sites], &params)?;
    let mut psi = CVec::from_fn(sites, |s, _| centred.value(&lattice.position(s), 0.0, &params));
    let norm = psi.norm();
    psi /= C64::from(norm);
    let coordinate: Vec<f64> = (0..sites).map(|s| lattice.position(s)[0]).collect();
    let v = velocity_form(&triple, &psi, &coordinate, &params)?[half]
        .ok_or_else(|| Error::Invariant("packet centre carries no weight".into()))?;
    Ok((v - orbital.momentum[0] / params.mass).abs())
}
