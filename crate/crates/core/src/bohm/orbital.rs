//! Gaussian orbitals with closed-form free or isotropic-harmonic evolution.
//!
//! Each axis factor is `exp(A x² + B x + C)` with complex `A, B, C` depending
//! on time only; the Schrödinger equation reduces to ordinary differential
//! equations for the three coefficients, which are solved exactly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, I};
use crate::params::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evolution {
    Free,
    /// `V(x) = ½ m ω² |x|²`.
    Harmonic { omega: f64 },
}

/// Coefficients of `exp(A x² + B x + C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl Quadratic {
    pub fn value(&self, x: f64) -> C64 {
        (self.a * x * x + self.b * x + self.c).exp()
    }

    /// `d/dx log` of the factor.
    pub fn log_derivative(&self, x: f64) -> C64 {
        self.a * (2.0 * x) + self.b
    }

    /// `∫ conj(f) g dx` over the real line.
    pub fn overlap(f: &Quadratic, g: &Quadratic) -> C64 {
        gaussian_integral(f.a.conj() + g.a, f.b.conj() + g.b, f.c.conj() + g.c)
    }
}

/// `∫ exp(a x² + b x + c) dx = √(π / −a) · exp(c − b²/4a)` for `Re a < 0`.
pub fn gaussian_integral(a: C64, b: C64, c: C64) -> C64 {
    (C64::from(PI) / -a).sqrt() * (c - b * b / (a * 4.0)).exp()
}

/// A normalized Gaussian packet, a product over axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbital {
    pub center: Vec<f64>,
    pub momentum: Vec<f64>,
    /// Position standard deviation of `|φ|²` per axis at `t = 0`.
    pub width: Vec<f64>,
    pub evolution: Evolution,
}

impl Orbital {
    pub fn new(center: Vec<f64>, momentum: Vec<f64>, width: Vec<f64>, evolution: Evolution) -> Result<Self> {
        let o = Self { center, momentum, width, evolution };
        o.validate()?;
        Ok(o)
    }

    /// Same width on every axis.
    pub fn isotropic(center: Vec<f64>, momentum: Vec<f64>, width: f64, evolution: Evolution) -> Result<Self> {
        let d = center.len();
        Self::new(center, momentum, vec![width; d], evolution)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.center.len();
        if d == 0 || self.momentum.len() != d || self.width.len() != d {
            return Err(Error::Shape(format!(
                "orbital has {} centre, {} momentum and {} width components",
                d,
                self.momentum.len(),
                self.width.len()
            )));
        }
        if self.width.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParams(format!("orbital widths must be positive: {:?}", self.width)));
        }
        if let Evolution::Harmonic { omega } = self.evolution {
            if !(omega > 0.0 && omega.is_finite()) {
                return Err(Error::InvalidParams(format!("oscillator frequency must be positive, got {omega}")));
            }
        }
        Ok(())
    }

    /// Axis factor at `t = 0`: `(2πσ²)^{-1/4} exp(−(x−x₀)²/4σ² + i p₀ (x−x₀)/ħ)`.
    fn initial(&self, axis: usize, hbar: f64) -> Quadratic {
        let (x0, p0, s) = (self.center[axis], self.momentum[axis], self.width[axis]);
        let a = C64::from(-1.0 / (4.0 * s * s));
        let b = C64::new(x0 / (2.0 * s * s), p0 / hbar);
        let c = C64::new(-x0 * x0 / (4.0 * s * s) - 0.25 * (2.0 * PI * s * s).ln(), -p0 * x0 / hbar);
        Quadratic { a, b, c }
    }

    /// Axis factor at time `t`.
    pub fn factor(&self, axis: usize, t: f64, params: &PhysicalParams) -> Quadratic {
        let (hbar, m) = (params.hbar, params.mass);
        let q0 = self.initial(axis, hbar);
        if t == 0.0 {
            return q0;
        }
        match self.evolution {
            Evolution::Free => {
                let d = C64::from(1.0) - I * (2.0 * hbar * t / m) * q0.a;
                Quadratic {
                    a: q0.a / d,
                    b: q0.b / d,
                    c: q0.c - 0.5 * d.ln() + I * (hbar / (2.0 * m)) * q0.b * q0.b * t / d,
                }
            }
            Evolution::Harmonic { omega } => {
                // A = −(m / 2iħ) u'/u with u'' = −ω² u, u(0) = 1, u'(0) = −2iħA₀ω/(mω)
                let k = -I * (2.0 * hbar / (m * omega)) * q0.a;
                let theta = omega * t;
                let u = C64::from(theta.cos()) + k * theta.sin();
                let du = (C64::from(-theta.sin()) + k * theta.cos()) * omega;
                let a = -(C64::from(m) / (I * 2.0 * hbar)) * du / u;
                Quadratic {
                    a,
                    b: q0.b / u,
                    c: q0.c - 0.5 * continuous_log(k, theta)
                        + I * (hbar / (2.0 * m)) * q0.b * q0.b * theta.sin() / (omega * u),
                }
            }
        }
    }

    pub fn factors(&self, t: f64, params: &PhysicalParams) -> Vec<Quadratic> {
        (0..self.dim()).map(|a| self.factor(a, t, params)).collect()
    }

    /// Value and gradient at `x`.
    pub fn value_gradient(&self, x: &[f64], t: f64, params: &PhysicalParams) -> (C64, Vec<C64>) {
        let factors = self.factors(t, params);
        let value: C64 = factors.iter().zip(x).map(|(f, &xa)| f.value(xa)).product();
        let grad = factors.iter().zip(x).map(|(f, &xa)| value * f.log_derivative(xa)).collect();
        (value, grad)
    }

    pub fn value(&self, x: &[f64], t: f64, params: &PhysicalParams) -> C64 {
        self.factors(t, params).iter().zip(x).map(|(f, &xa)| f.value(xa)).product()
    }
}

/// `log u(θ)` for `u = cos θ + k sin θ`, continuous in `θ` from `log u(0) = 0`.
///
/// `u(θ + π) = −u(θ)`, so shifting `θ` into `[−π/2, π/2]` by `nπ` adds `nπ`
/// to the argument; on that interval the principal branch does not jump
/// because `cos θ ≥ 0` and `Im k > 0` keeps `u` in the closed right half-plane
/// away from the negative axis.
fn continuous_log(k: C64, theta: f64) -> C64 {
    let n = (theta / PI).round();
    let t = theta - n * PI;
    let u = C64::from(t.cos()) + k * t.sin();
    C64::new(u.norm().ln(), u.arg() + n * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> PhysicalParams {
        PhysicalParams { hbar: 0.8, mass: 1.3, spacing: 1.0 }
    }

    fn norm_1d(q: &Quadratic) -> f64 {
        Quadratic::overlap(q, q).re
    }

    /// `iħ ∂ₜφ − Hφ` by finite differences, relative to `|φ|`.
    fn schrodinger_residual(o: &Orbital, x: &[f64], t: f64, p: &PhysicalParams) -> f64 {
        let dt = 1e-5;
        let h = 1e-4;
        let phi = o.value(x, t, p);
        let dphi_dt = (o.value(x, t + dt, p) - o.value(x, t - dt, p)) / (2.0 * dt);
        let mut lap = C64::from(0.0);
        for a in 0..x.len() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[a] += h;
            xm[a] -= h;
            lap += (o.value(&xp, t, p) + o.value(&xm, t, p) - phi * 2.0) / (h * h);
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let v = match o.evolution {
            Evolution::Free => 0.0,
            Evolution::Harmonic { omega } => 0.5 * p.mass * omega * omega * r2,
        };
        let h_phi = -lap * (p.hbar * p.hbar / (2.0 * p.mass)) + phi * v;
        (I * p.hbar * dphi_dt - h_phi).norm() / phi.norm()
    }

    #[test]
    fn peak_value_at_centre() {
        let o = Orbital::isotropic(vec![0.3], vec![0.0], 0.7, Evolution::Free).unwrap();
        let v = o.value(&[0.3], 0.0, &params());
        let expected = (2.0 * PI * 0.49f64).powf(-0.25);
        assert!((v - C64::from(expected)).norm() < 1e-15);
    }

    #[test]
    fn coefficients_solve_schrodinger() {
        let p = params();
        for evolution in [Evolution::Free, Evolution::Harmonic { omega: 1.7 }] {
            let o = Orbital::new(vec![0.4, -0.2], vec![0.9, 0.3], vec![0.8, 1.1], evolution).unwrap();
            for &t in &[0.3, 1.0, 2.9, 7.0] {
                for x in [[0.1, 0.2], [-0.5, 0.7], [1.0, -1.0]] {
                    let r = schrodinger_residual(&o, &x, t, &p);
                    assert!(r < 1e-4, "{evolution:?} t={t} x={x:?}: {r}");
                }
            }
        }
    }

    #[test]
    fn norm_is_preserved() {
        let p = params();
        for evolution in [Evolution::Free, Evolution::Harmonic { omega: 0.6 }] {
            let o = Orbital::isotropic(vec![1.0], vec![-0.4], 0.5, evolution).unwrap();
            for t in [0.0, 0.5, 3.0, 11.0] {
                assert!((norm_1d(&o.factor(0, t, &p)) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn harmonic_log_is_continuous() {
        let p = params();
        let o = Orbital::isotropic(vec![0.5], vec![0.2], 0.3, Evolution::Harmonic { omega: 2.0 }).unwrap();
        let mut prev = o.value(&[0.1], 0.0, &p);
        let mut t = 0.0;
        while t < 10.0 {
            t += 1e-3;
            let v = o.value(&[0.1], t, &p);
            assert!((v - prev).norm() < 1e-2, "jump at t = {t}");
            prev = v;
        }
    }

    #[test]
    fn harmonic_ground_state_is_stationary() {
        let p = params();
        let omega = 1.5;
        let width = (p.hbar / (2.0 * p.mass * omega)).sqrt();
        let o = Orbital::isotropic(vec![0.0], vec![0.0], width, Evolution::Harmonic { omega }).unwrap();
        for t in [0.4, 2.0] {
            let f = o.factor(0, t, &p);
            let f0 = o.factor(0, 0.0, &p);
            assert!((f.a - f0.a).norm() < 1e-14);
            // only a global phase e^{−iωt/2}
            assert!((f.c - f0.c - C64::new(0.0, -omega * t / 2.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn invalid_orbitals() {
        assert!(Orbital::new(vec![0.0], vec![0.0, 1.0], vec![1.0], Evolution::Free).is_err());
        assert!(Orbital::isotropic(vec![0.0], vec![0.0], 0.0, Evolution::Free).is_err());
        assert!(Orbital::isotropic(vec![0.0], vec![0.0], 1.0, Evolution::Harmonic { omega: -1.0 }).is_err());
    }
}
