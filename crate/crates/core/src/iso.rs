//! The unitary correspondence between sections of a bundle over the
//! unordered configuration graph and wave functions on the ordered graph:
//! `(Uψ)(q̂) = N!^{-1/2} Î_q̂ ψ(π(q̂))`, with `Î` a parallel trivialization of
//! the pulled-back bundle.

use crate::bundle::{pullback, trivialize, DiscreteBundle, Frame, Section};
use crate::confspace::{ConfigGraph, ConfigGraphPair};
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, CsrMatrix, C64, ZERO};
use crate::perm::{factorial, Permutation};
use crate::triple::{OrbitBasis, Symmetry};

/// A vector-valued function on ordered vertices, stored contiguously by vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedFunction {
    pub rank: usize,
    pub values: CVec,
}

impl OrderedFunction {
    pub fn scalar(values: CVec) -> Self {
        Self { rank: 1, values }
    }

    pub fn zeros(n_vertices: usize, rank: usize) -> Self {
        Self { rank, values: CVec::zeros(n_vertices * rank) }
    }

    pub fn n_vertices(&self) -> usize {
        self.values.len() / self.rank
    }

    pub fn at(&self, v: usize) -> CVec {
        self.values.rows(v * self.rank, self.rank).into_owned()
    }

    pub fn norm_sqr(&self, cell_volume: f64) -> f64 {
        self.values.norm_squared() * cell_volume
    }
}

fn check_size(graph: &ConfigGraph, f: &OrderedFunction) -> Result<()> {
    if f.n_vertices() != graph.n_vertices() || !f.values.len().is_multiple_of(f.rank) {
        return Err(Error::SizeMismatch { expected: graph.n_vertices() * f.rank, found: f.values.len() });
    }
    Ok(())
}

/// `(1/N!) Σ_σ χ(σ) f(σ·q̂)` with `χ` the sign (anti) or 1 (sym).
pub fn symmetrize_projector(graph: &ConfigGraph, f: &OrderedFunction, kind: Symmetry) -> Result<OrderedFunction> {
    check_size(graph, f)?;
    let n = graph.particles();
    let perms = Permutation::all(n);
    let r = f.rank;
    let norm = 1.0 / perms.len() as f64;
    let mut out = OrderedFunction::zeros(graph.n_vertices(), r);
    for sigma in &perms {
        let weight = C64::from(kind.sign(sigma.sign()) * norm);
        for v in 0..graph.n_vertices() {
            let w = graph.permuted_vertex(v, sigma);
            for i in 0..r {
                out.values[v * r + i] += f.values[w * r + i] * weight;
            }
        }
    }
    Ok(out)
}

/// `max |f(σ·q̂) − χ(σ) f(q̂)|` over all `σ ∈ S_N` and vertices.
pub fn exchange_residual(graph: &ConfigGraph, f: &OrderedFunction, kind: Symmetry) -> Result<f64> {
    check_size(graph, f)?;
    let r = f.rank;
    let mut worst = 0.0f64;
    for sigma in Permutation::all(graph.particles()) {
        let s = kind.sign(sigma.sign());
        for v in 0..graph.n_vertices() {
            let w = graph.permuted_vertex(v, &sigma);
            for i in 0..r {
                worst = worst.max((f.values[w * r + i] - f.values[v * r + i] * s).norm());
            }
        }
    }
    Ok(worst)
}

/// `U` for one bundle over a configuration graph pair, fixed by a parallel
/// frame of the pullback.
#[derive(Debug, Clone)]
pub struct Correspondence<'a> {
    pair: &'a ConfigGraphPair,
    rank: usize,
    frame: Frame,
    scale: f64,
}

impl<'a> Correspondence<'a> {
    /// Trivializes the pullback of `bundle`; fails if it has nontrivial holonomy.
    pub fn new(pair: &'a ConfigGraphPair, bundle: &DiscreteBundle) -> Result<Self> {
        let pb = pullback(bundle, pair)?;
        let frame = trivialize(&pb)?.into_frame()?;
        Ok(Self::from_parts(pair, bundle.rank(), frame))
    }

    /// Uses a caller-supplied frame, which must be parallel for the pullback.
    pub fn with_frame(pair: &'a ConfigGraphPair, bundle: &DiscreteBundle, frame: Frame) -> Result<Self> {
        let pb = pullback(bundle, pair)?;
        let residual = frame.parallel_residual(&pb);
        if residual > 1e-10 {
            return Err(Error::InvalidFrame { residual });
        }
        Ok(Self::from_parts(pair, bundle.rank(), frame))
    }

    /// The descent map for bosons: the trivial line bundle with the constant frame.
    pub fn bosonic(pair: &'a ConfigGraphPair) -> Self {
        Self::from_parts(pair, 1, Frame::identity(pair.n_ordered(), 1))
    }

    fn from_parts(pair: &'a ConfigGraphPair, rank: usize, frame: Frame) -> Self {
        let scale = 1.0 / (factorial(pair.particles()) as f64).sqrt();
        Self { pair, rank, frame, scale }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `(Uψ)(q̂) = N!^{-1/2} Î_q̂ ψ(π(q̂))`.
    pub fn apply(&self, section: &Section) -> Result<OrderedFunction> {
        let r = self.rank;
        if section.rank != r || section.n_vertices() != self.pair.n_quotient() {
            return Err(Error::SizeMismatch { expected: self.pair.n_quotient() * r, found: section.values.len() });
        }
        let mut out = OrderedFunction::zeros(self.pair.n_ordered(), r);
        for v in 0..self.pair.n_ordered() {
            let x = self.frame.trivialization(v) * section.fiber(self.pair.project_vertex(v)) * C64::from(self.scale);
            out.values.rows_mut(v * r, r).copy_from(&x);
        }
        Ok(out)
    }

    /// `ψ(q) = √N! Î_q̂⁻¹ f(q̂)`, required to agree over all representatives `q̂`.
    pub fn invert(&self, f: &OrderedFunction) -> Result<Section> {
        check_size(self.pair.ordered(), f)?;
        let r = self.rank;
        if f.rank != r {
            return Err(Error::SizeMismatch { expected: r, found: f.rank });
        }
        let mut section = Section::zeros(self.pair.n_quotient(), r);
        let spread = self.invert_with_spread(f, &mut section);
        if spread > 1e-10 {
            return Err(Error::SymmetryViolation {
                what: "ordered function does not descend to a section".into(),
                residual: spread,
            });
        }
        Ok(section)
    }

    /// Largest disagreement between representatives; used by [`Correspondence::invert`].
    pub fn descent_spread(&self, f: &OrderedFunction) -> Result<f64> {
        check_size(self.pair.ordered(), f)?;
        let mut section = Section::zeros(self.pair.n_quotient(), self.rank);
        Ok(self.invert_with_spread(f, &mut section))
    }

    fn invert_with_spread(&self, f: &OrderedFunction, section: &mut Section) -> f64 {
        let back = 1.0 / self.scale;
        let mut spread = 0.0f64;
        for q in 0..self.pair.n_quotient() {
            let c = self.pair.canonical_vertex(q);
            let value = &self.frame.matrices[c] * f.at(c) * C64::from(back);
            for &v in self.pair.preimages(q) {
                let other = &self.frame.matrices[v] * f.at(v) * C64::from(back);
                spread = spread.max((other - &value).norm());
            }
            section.set_fiber(q, &value);
        }
        spread
    }

    /// `U` as an `(ordered · r) × (quotient · r)` matrix, one `r×r` block per row block.
    pub fn matrix(&self) -> CsrMatrix {
        let r = self.rank;
        let mut t = Vec::with_capacity(self.pair.n_ordered() * r * r);
        for v in 0..self.pair.n_ordered() {
            let q = self.pair.project_vertex(v);
            let block = self.frame.trivialization(v);
            for i in 0..r {
                for j in 0..r {
                    let x = block[(i, j)] * self.scale;
                    if x != ZERO {
                        t.push((v * r + i, q * r + j, x));
                    }
                }
            }
        }
        CsrMatrix::from_triplets(self.pair.n_ordered() * r, self.pair.n_quotient() * r, t)
    }

    /// `B† U` for an orbit basis `B` of a rank-1 correspondence: the unitary from
    /// the bundle triple's space onto the subspace triple's space.
    pub fn subspace_matrix(&self, basis: &OrbitBasis) -> Result<CMat> {
        if self.rank != 1 {
            return Err(Error::Unsupported("subspace matrices are defined for line bundles".into()));
        }
        if basis.ambient_dim() != self.pair.n_ordered() {
            return Err(Error::SizeMismatch { expected: self.pair.n_ordered(), found: basis.ambient_dim() });
        }
        let mut m = CMat::zeros(basis.len(), self.pair.n_quotient());
        for v in 0..self.pair.n_ordered() {
            if let Some((col, c)) = basis.entry(v) {
                let q = self.pair.project_vertex(v);
                m[(col, q)] += c.conj() * self.frame.trivialization(v)[(0, 0)] * self.scale;
            }
        }
        Ok(m)
    }
}
