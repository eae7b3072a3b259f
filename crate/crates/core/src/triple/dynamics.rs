//! Schrödinger evolution, Born weights and the discrete velocity form.

use nalgebra::DMatrix;

use super::QuantumTriple;
use crate::error::{Error, Result};
use crate::linalg::{eigh, CMat, CVec, CsrMatrix, C64, I};
use crate::params::PhysicalParams;

/// Dimension up to which evolution uses a full eigendecomposition.
pub const DENSE_LIMIT: usize = 3000;

const KRYLOV_DIM: usize = 30;
const KRYLOV_TOL: f64 = 1e-10;

/// `ψ ↦ e^{−iHt/ħ} ψ`, reusable across times.
#[derive(Debug, Clone)]
pub enum Propagator {
    Dense { values: Vec<f64>, vectors: CMat, hbar: f64 },
    Krylov { hamiltonian: CsrMatrix, hbar: f64, tol: f64 },
}

impl Propagator {
    pub fn new(triple: &QuantumTriple, params: &PhysicalParams) -> Self {
        Self::with_dense_limit(triple, params, DENSE_LIMIT)
    }

    /// Spectral propagation up to `limit` dimensions, Krylov beyond.
    pub fn with_dense_limit(triple: &QuantumTriple, params: &PhysicalParams, limit: usize) -> Self {
        if triple.dim() <= limit {
            let (values, vectors) = eigh(&triple.hamiltonian().to_dense());
            Propagator::Dense { values, vectors, hbar: params.hbar }
        } else {
            Propagator::Krylov { hamiltonian: triple.hamiltonian().clone(), hbar: params.hbar, tol: KRYLOV_TOL }
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, Propagator::Dense { .. })
    }

    pub fn apply(&self, psi: &CVec, time: f64) -> CVec {
        if time == 0.0 {
            return psi.clone();
        }
        match self {
            Propagator::Dense { values, vectors, hbar } => {
                let mut c = vectors.adjoint() * psi;
                for (k, &lambda) in values.iter().enumerate() {
                    c[k] *= C64::from_polar(1.0, -lambda * time / hbar);
                }
                vectors * c
            }
            Propagator::Krylov { hamiltonian, hbar, tol } => krylov_evolve(hamiltonian, psi, time, *hbar, *tol),
        }
    }
}

/// Lanczos propagation. Each step builds one Krylov space and then takes the
/// longest sub-step (halving from what remains) whose a-posteriori error
/// estimate `β_m |(e^{−iTτ})_{m,1}|` fits its share of the tolerance.
fn krylov_evolve(h: &CsrMatrix, psi: &CVec, time: f64, hbar: f64, tol: f64) -> CVec {
    let n = h.nrows();
    let m_max = KRYLOV_DIM.min(n);
    let mut state = psi.clone();
    let mut done = 0.0;
    let total = time.abs();
    let direction = time.signum();
    let scale = h.max_row_sum().max(1.0);
    while done < total {
        let beta0 = state.norm();
        if beta0 == 0.0 {
            break;
        }
        let mut basis: Vec<CVec> = vec![&state / C64::from(beta0)];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let mut breakdown = false;
        for j in 0..m_max {
            let mut w = h.mul_vec(&basis[j]);
            for v in &basis {
                let c = v.dotc(&w);
                w -= v * c;
            }
            alpha.push(basis[j].dotc(&h.mul_vec(&basis[j])).re);
            let b = w.norm();
            beta.push(b);
            if b < 1e-12 * scale {
                breakdown = true;
                break;
            }
            if j + 1 < m_max {
                basis.push(w / C64::from(b));
            }
        }
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            t[(j, j)] = alpha[j];
            if j + 1 < m {
                t[(j, j + 1)] = beta[j];
                t[(j + 1, j)] = beta[j];
            }
        }
        let eig = t.symmetric_eigen();
        let coeffs = |tau: f64| -> Vec<C64> {
            (0..m)
                .map(|r| {
                    (0..m)
                        .map(|k| {
                            let phase = C64::from_polar(1.0, -eig.eigenvalues[k] * tau * direction / hbar);
                            C64::from(eig.eigenvectors[(r, k)] * eig.eigenvectors[(0, k)]) * phase
                        })
                        .sum()
                })
                .collect()
        };
        let mut tau = total - done;
        let y = loop {
            let y = coeffs(tau);
            let err = if breakdown { 0.0 } else { beta[m - 1] * y[m - 1].norm() };
            if err <= tol * tau / total || tau < total * 1e-12 {
                break y;
            }
            tau *= 0.5;
        };
        let mut next = CVec::zeros(n);
        for (v, c) in basis.iter().zip(&y) {
            next += v * (*c * beta0);
        }
        state = next;
        done += tau;
    }
    state
}

/// `e^{−iHt/ħ} ψ`.
pub fn evolve(triple: &QuantumTriple, psi: &CVec, time: f64, params: &PhysicalParams) -> Result<CVec> {
    check_state(triple, psi)?;
    Ok(Propagator::new(triple, params).apply(psi, time))
}

fn check_state(triple: &QuantumTriple, psi: &CVec) -> Result<()> {
    if psi.len() != triple.dim() {
        return Err(Error::SizeMismatch { expected: triple.dim(), found: psi.len() });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-10 {
        log::warn!("state is not normalized (norm {norm})");
    }
    Ok(())
}

/// `⟨ψ_t|Q(cell)|ψ_t⟩` for each cell.
pub fn born_distribution(triple: &QuantumTriple, psi: &CVec, time: f64, params: &PhysicalParams) -> Result<Vec<f64>> {
    let psi_t = evolve(triple, psi, time, params)?;
    Ok((0..triple.pvm().len()).map(|c| triple.pvm().weight(c, &psi_t)).collect())
}

/// `⟨ψ|f̂|ψ⟩` with `f̂ = Σ f(cell) Q(cell)`.
pub fn expectation(triple: &QuantumTriple, psi: &CVec, f: &[f64]) -> Result<f64> {
    check_state(triple, psi)?;
    check_cells(triple, f)?;
    Ok(psi.dotc(&triple.pvm().multiply(f, psi)).re)
}

fn check_cells(triple: &QuantumTriple, f: &[f64]) -> Result<()> {
    if f.len() != triple.pvm().len() {
        return Err(Error::SizeMismatch { expected: triple.pvm().len(), found: f.len() });
    }
    Ok(())
}

/// `Re⟨ψ|Q(cell) (i/ħ)[H, f̂]|ψ⟩ / ⟨ψ|Q(cell)|ψ⟩` per cell, `None` where the
/// denominator is below `1e-14`.
pub fn velocity_form(triple: &QuantumTriple, psi: &CVec, f: &[f64], params: &PhysicalParams) -> Result<Vec<Option<f64>>> {
    check_state(triple, psi)?;
    check_cells(triple, f)?;
    let pvm = triple.pvm();
    let h = triple.hamiltonian();
    let commutator = h.mul_vec(&pvm.multiply(f, psi)) - pvm.multiply(f, &h.mul_vec(psi));
    let phi = commutator * (I / params.hbar);
    Ok((0..pvm.len())
        .map(|c| {
            let denom = pvm.weight(c, psi);
            if denom < 1e-14 {
                None
            } else {
                Some(pvm.apply(c, psi).dotc(&phi).re / denom)
            }
        })
        .collect())
}
