//! Anti-symmetrized products of Gaussian orbitals and their Bohmian velocity field.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bohm::orbital::{Orbital, Quadratic};
use crate::error::{Error, Result};
use crate::linalg::{C64, CMat, I};
use crate::params::PhysicalParams;
use crate::perm::factorial;

/// Closed-form smooth scalar on `R^d`, with gradient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarField {
    /// `k · x`
    Linear { k: Vec<f64> },
    /// `½ c |x − centre|²`
    Quadratic { curvature: f64, center: Vec<f64> },
    /// `amplitude · sin(k · x + phase)`
    Sine { amplitude: f64, k: Vec<f64>, phase: f64 },
    Sum(Vec<ScalarField>),
}

impl ScalarField {
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            ScalarField::Linear { k } => dot(k, x),
            ScalarField::Quadratic { curvature, center } => {
                0.5 * curvature * x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum::<f64>()
            }
            ScalarField::Sine { amplitude, k, phase } => amplitude * (dot(k, x) + phase).sin(),
            ScalarField::Sum(parts) => parts.iter().map(|p| p.value(x)).sum(),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ScalarField::Linear { k } => k.clone(),
            ScalarField::Quadratic { curvature, center } => {
                x.iter().zip(center).map(|(a, c)| curvature * (a - c)).collect()
            }
            ScalarField::Sine { amplitude, k, phase } => {
                let c = amplitude * (dot(k, x) + phase).cos();
                k.iter().map(|ka| c * ka).collect()
            }
            ScalarField::Sum(parts) => {
                let mut g = vec![0.0; x.len()];
                for p in parts {
                    for (gi, pi) in g.iter_mut().zip(p.gradient(x)) {
                        *gi += pi;
                    }
                }
                g
            }
        }
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        let ok = match self {
            ScalarField::Linear { k } | ScalarField::Sine { k, .. } => k.len() == d,
            ScalarField::Quadratic { center, .. } => center.len() == d,
            ScalarField::Sum(parts) => return parts.iter().try_for_each(|p| p.check_dim(d)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(format!("scalar field does not live on R^{d}")))
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Vector potential `A = ∇χ` together with a gauge function `f`.
///
/// Only curl-free potentials are offered: for them the state in gauge `A` is
/// `e^{iχ/ħ}ψ₀` with `ψ₀` the field-free solution, so evolution stays closed form.
/// The transformed pair is `(A + ∇f, e^{if/ħ}ψ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeField {
    pub potential: ScalarField,
    pub transform: ScalarField,
}

impl GaugeField {
    pub fn vector_potential(&self, x: &[f64]) -> Vec<f64> {
        self.potential.gradient(x)
    }

    /// The same physics described in the transformed gauge.
    pub fn transformed(&self) -> ScalarField {
        ScalarField::Sum(vec![self.potential.clone(), self.transform.clone()])
    }
}

/// `ψ(x̂, t) = det[φ_k(x_j, t)] / √(N! · det S)`, `S` the orbital overlap matrix.
///
/// For orthonormal orbitals `det S = 1`; the extra factor keeps `ψ` normalized
/// when the packets overlap.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlaterState {
    pub orbitals: Vec<Orbital>,
    pub dim: usize,
    pub params: PhysicalParams,
    /// Pure-gauge vector potential `∇χ`, with `ψ` multiplied by `e^{iχ/ħ}`.
    pub gauge: Option<ScalarField>,
    #[serde(skip)]
    normalization: f64,
}

pub const NODE_GUARD: f64 = 1e-12;

impl SlaterState {
    pub fn new(orbitals: Vec<Orbital>, params: PhysicalParams) -> Result<Self> {
        params.validate()?;
        let dim = orbitals.first().map(Orbital::dim).ok_or_else(|| Error::Shape("no orbitals".into()))?;
        for o in &orbitals {
            o.validate()?;
            if o.dim() != dim {
                return Err(Error::Shape(format!("orbitals mix dimensions {dim} and {}", o.dim())));
            }
        }
        let mut state = Self { orbitals, dim, params, gauge: None, normalization: 1.0 };
        let det_s = state.overlap(0.0).determinant();
        if det_s.re <= 1e-14 {
            return Err(Error::InvalidParams(format!(
                "orbitals are numerically linearly dependent (overlap determinant {:.3e})",
                det_s.re
            )));
        }
        state.normalization = 1.0 / (factorial(state.particles()) as f64 * det_s.re).sqrt();
        Ok(state)
    }

    /// Attaches the pure-gauge potential `∇χ`; single-particle states only.
    pub fn with_gauge(mut self, chi: ScalarField) -> Result<Self> {
        if self.particles() != 1 {
            return Err(Error::Unsupported(format!(
                "gauge fields are offered for one particle, state has {}",
                self.particles()
            )));
        }
        chi.check_dim(self.dim)?;
        self.gauge = Some(chi);
        Ok(self)
    }

    pub fn particles(&self) -> usize {
        self.orbitals.len()
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `S_kl = ⟨φ_k | φ_l⟩`, constant under the unitary evolution.
    pub fn overlap(&self, t: f64) -> CMat {
        let factors: Vec<Vec<Quadratic>> = self.orbitals.iter().map(|o| o.factors(t, &self.params)).collect();
        let n = self.particles();
        CMat::from_fn(n, n, |k, l| {
            (0..self.dim).map(|a| Quadratic::overlap(&factors[k][a], &factors[l][a])).product()
        })
    }

    fn check_config(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.particles() * self.dim {
            return Err(Error::SizeMismatch { expected: self.particles() * self.dim, found: x.len() });
        }
        Ok(())
    }

    /// Orbital matrix `M_jk = φ_k(x_j)` and its derivatives `∂M_jk/∂x_{j,a}`.
    fn matrices(&self, x: &[f64], t: f64) -> (CMat, Vec<CMat>) {
        let n = self.particles();
        let d = self.dim;
        let mut m = CMat::zeros(n, n);
        let mut dm = vec![CMat::zeros(n, n); d];
        for (k, o) in self.orbitals.iter().enumerate() {
            let factors = o.factors(t, &self.params);
            for j in 0..n {
                let xj = &x[j * d..(j + 1) * d];
                let value: C64 = factors.iter().zip(xj).map(|(f, &xa)| f.value(xa)).product();
                m[(j, k)] = value;
                for a in 0..d {
                    dm[a][(j, k)] = value * factors[a].log_derivative(xj[a]);
                }
            }
        }
        (m, dm)
    }

    /// Value and gradient in `R^{Nd}`, particle-major.
    pub fn wave_value(&self, x: &[f64], t: f64) -> Result<(C64, Vec<C64>)> {
        self.check_config(x)?;
        let (value, grad, _) = self.evaluate(x, t);
        Ok((value, grad))
    }

    /// Value, gradient and the Hadamard bound on `|ψ|` used as the local scale.
    fn evaluate(&self, x: &[f64], t: f64) -> (C64, Vec<C64>, f64) {
        let n = self.particles();
        let d = self.dim;
        let (m, dm) = self.matrices(x, t);
        let scale = self.normalization * m.row_iter().map(|r| r.norm()).product::<f64>();
        let value = det(&m) * self.normalization;
        let mut grad = vec![C64::from(0.0); n * d];
        for j in 0..n {
            for a in 0..d {
                let mut replaced = m.clone();
                replaced.set_row(j, &dm[a].row(j));
                grad[j * d + a] = det(&replaced) * self.normalization;
            }
        }
        if let Some(chi) = &self.gauge {
            let phase = C64::from_polar(1.0, chi.value(x) / self.params.hbar);
            let g = chi.gradient(x);
            for (ga, &gc) in grad.iter_mut().zip(&g) {
                *ga = phase * (*ga + I * (gc / self.params.hbar) * value);
            }
            return (phase * value, grad, scale);
        }
        (value, grad, scale)
    }

    /// `v = (1/m)(ħ Im(∇ψ/ψ) − A)`, with `A = 0` unless a gauge is attached.
    pub fn velocity(&self, x: &[f64], t: f64) -> Result<Vec<f64>> {
        self.check_config(x)?;
        let (value, grad, scale) = self.evaluate(x, t);
        let guard = NODE_GUARD * scale;
        if !(value.norm() > guard) {
            return Err(Error::NodeGuard { t, magnitude: value.norm(), guard });
        }
        let (hbar, mass) = (self.params.hbar, self.params.mass);
        let mut v: Vec<f64> = grad.iter().map(|g| hbar * (g / value).im / mass).collect();
        if let Some(chi) = &self.gauge {
            for (va, aa) in v.iter_mut().zip(chi.gradient(x)) {
                *va -= aa / mass;
            }
        }
        Ok(v)
    }

    pub fn density(&self, x: &[f64], t: f64) -> Result<f64> {
        Ok(self.wave_value(x, t)?.0.norm_sqr())
    }
}

fn det(m: &CMat) -> C64 {
    match m.nrows() {
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => DMatrix::determinant(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bohm::orbital::Evolution;
    use crate::perm::Permutation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn params() -> PhysicalParams {
        PhysicalParams { hbar: 1.0, mass: 1.0, spacing: 1.0 }
    }

    fn three_fermions_2d(evolution: Evolution) -> SlaterState {
        let orbitals = vec![
            Orbital::isotropic(vec![-1.0, 0.2], vec![0.5, 0.0], 0.8, evolution).unwrap(),
            Orbital::isotropic(vec![0.7, -0.4], vec![-0.3, 0.4], 1.0, evolution).unwrap(),
            Orbital::new(vec![0.1, 1.1], vec![0.0, -0.6], vec![0.6, 0.9], evolution).unwrap(),
        ];
        SlaterState::new(orbitals, params()).unwrap()
    }

    fn permute(x: &[f64], sigma: &Permutation, d: usize) -> Vec<f64> {
        // (σ·x̂)_k = x_{σ(k)}
        sigma.zero_based().iter().flat_map(|&s| x[s * d..(s + 1) * d].to_vec()).collect()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for evolution in [Evolution::Free, Evolution::Harmonic { omega: 0.9 }] {
            let s = three_fermions_2d(evolution);
            for _ in 0..100 {
                let x: Vec<f64> = (0..6).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let t = rng.random_range(0.0..2.0);
                let (_, grad) = s.wave_value(&x, t).unwrap();
                let h = 1e-6;
                let scale = grad.iter().map(|g| g.norm()).fold(0.0, f64::max);
                for i in 0..6 {
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[i] += h;
                    xm[i] -= h;
                    let fd = (s.wave_value(&xp, t).unwrap().0 - s.wave_value(&xm, t).unwrap().0) / (2.0 * h);
                    assert!((fd - grad[i]).norm() <= 1e-6 * scale.max(1e-300), "component {i}");
                }
            }
        }
    }

    #[test]
    fn antisymmetry_and_velocity_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = three_fermions_2d(Evolution::Free);
        for _ in 0..200 {
            let x: Vec<f64> = (0..6).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let t = rng.random_range(0.0..3.0);
            let sigma = Permutation::random(3, &mut rng);
            let sx = permute(&x, &sigma, 2);
            let (v0, _) = s.wave_value(&x, t).unwrap();
            let (v1, _) = s.wave_value(&sx, t).unwrap();
            assert!((v1 - v0 * sigma.sign() as f64).norm() < 1e-12 * v0.norm().max(1e-3));
            let w0 = s.velocity(&x, t).unwrap();
            let w1 = s.velocity(&sx, t).unwrap();
            let expected = permute(&w0, &sigma, 2);
            for (a, b) in w1.iter().zip(&expected) {
                assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn free_packet_velocity_at_centre() {
        let p = PhysicalParams { hbar: 1.0, mass: 2.0, spacing: 1.0 };
        let o = Orbital::isotropic(vec![0.5, -0.5], vec![1.2, -0.4], 0.7, Evolution::Free).unwrap();
        let s = SlaterState::new(vec![o], p).unwrap();
        let v = s.velocity(&[0.5, -0.5], 0.0).unwrap();
        assert!((v[0] - 0.6).abs() < 1e-14 && (v[1] + 0.2).abs() < 1e-14);
    }

    #[test]
    fn real_ground_state_is_at_rest() {
        let p = params();
        let omega = 2.0;
        let w = (p.hbar / (2.0 * p.mass * omega)).sqrt();
        let o = Orbital::isotropic(vec![0.0], vec![0.0], w, Evolution::Harmonic { omega }).unwrap();
        let s = SlaterState::new(vec![o], p).unwrap();
        for t in [0.0, 0.7, 3.1] {
            assert!(s.velocity(&[0.37], t).unwrap()[0].abs() < 1e-14);
        }
    }

    #[test]
    fn monte_carlo_norm() {
        // importance sampling from the Hadamard envelope ∏_j (1/N)Σ_k |φ_k(x_j)|²
        let s = three_fermions_2d(Evolution::Free);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 3;
        let samples = 100_000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..samples {
            let mut x = Vec::with_capacity(6);
            for _ in 0..n {
                let o = &s.orbitals[rng.random_range(0..n)];
                for a in 0..2 {
                    x.push(o.center[a] + o.width[a] * rng.sample::<f64, _>(StandardNormal));
                }
            }
            let g: f64 = (0..n)
                .map(|j| s.orbitals.iter().map(|o| o.value(&x[2 * j..2 * j + 2], 0.0, &s.params).norm_sqr()).sum::<f64>() / n as f64)
                .product();
            let w = s.density(&x, 0.0).unwrap() / g;
            sum += w;
            sum2 += w * w;
        }
        let mean = sum / samples as f64;
        let se = ((sum2 / samples as f64 - mean * mean) / samples as f64).sqrt();
        assert!((mean - 1.0).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn node_guard_at_coincidence() {
        let s = three_fermions_2d(Evolution::Free);
        let x = [0.3, 0.3, 0.3, 0.3, 1.0, -1.0];
        assert!(matches!(s.velocity(&x, 0.5), Err(Error::NodeGuard { .. })));
    }

    #[test]
    fn gauge_requires_single_particle() {
        let chi = ScalarField::Linear { k: vec![1.0, 0.0] };
        assert!(three_fermions_2d(Evolution::Free).with_gauge(chi).is_err());
    }

    #[test]
    fn gauge_transformation_leaves_velocity_unchanged() {
        let o = Orbital::isotropic(vec![0.0, 0.0], vec![0.4, 0.1], 1.0, Evolution::Free).unwrap();
        let base = SlaterState::new(vec![o], params()).unwrap();
        let gauge = GaugeField {
            potential: ScalarField::Sine { amplitude: 0.8, k: vec![1.0, 2.0], phase: 0.3 },
            transform: ScalarField::Quadratic { curvature: 1.7, center: vec![0.2, -0.5] },
        };
        let a = base.clone().with_gauge(gauge.potential.clone()).unwrap();
        let b = base.clone().with_gauge(gauge.transformed()).unwrap();
        for x in [[0.1, 0.2], [-1.0, 0.5]] {
            let va = a.velocity(&x, 0.6).unwrap();
            let vb = b.velocity(&x, 0.6).unwrap();
            let v0 = base.velocity(&x, 0.6).unwrap();
            for i in 0..2 {
                assert!((va[i] - vb[i]).abs() < 1e-12);
                assert!((va[i] - v0[i]).abs() < 1e-12);
            }
            // the canonical part alone does change
            let (psi, grad) = b.wave_value(&x, 0.6).unwrap();
            assert!(((grad[0] / psi).im - (base.wave_value(&x, 0.6).unwrap().1[0] / base.wave_value(&x, 0.6).unwrap().0).im).abs() > 1e-3);
        }
    }
}
