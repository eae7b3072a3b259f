//! Discrete flat Hermitian bundles: one unitary per edge of a graph, acting
//! as parallel transport from the fiber over the tail to the fiber over the
//! head. The reverse edge transports by the adjoint.

mod construct;
mod gauge;
mod laplacian;

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

pub use construct::{
    anyon_bundle, bundle_from_character, bundle_from_representation, directsum_ambient_bundle,
    directsum_antisym_bundle, exterior_power_bundle, pseudoscalar_bundle, Character, Representation,
};
pub use gauge::{
    gauge_equivalence, is_gauge_equivalent, trivialize, trivialize_at, GaugeComparison, Trivialization,
};
pub use laplacian::connection_laplacian;

use crate::confspace::{ConfigGraphPair, DiscretePath};
use crate::error::{Error, Result};
use crate::graph::{DirEdge, Graph};
use crate::linalg::{cis, random_unitary, unitarity_residual, CMat, CVec, C64, ONE};

/// Per-edge unitaries are accepted when `‖U†U − I‖_F` is below this (times the rank).
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct DiscreteBundle {
    graph: Arc<Graph>,
    rank: usize,
    links: Vec<CMat>,
}

impl DiscreteBundle {
    /// `links[e]` transports along edge `e` from `edges[e][0]` to `edges[e][1]`.
    pub fn new(graph: Arc<Graph>, rank: usize, links: Vec<CMat>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Shape("bundle rank must be at least 1".into()));
        }
        if links.len() != graph.n_edges() {
            return Err(Error::SizeMismatch { expected: graph.n_edges(), found: links.len() });
        }
        for (e, u) in links.iter().enumerate() {
            if u.shape() != (rank, rank) {
                return Err(Error::Shape(format!("link {e} has shape {:?}, expected {rank}x{rank}", u.shape())));
            }
            let r = unitarity_residual(u);
            if r > UNITARITY_TOL * rank as f64 {
                return Err(Error::Invariant(format!("link {e} is not unitary (residual {r:.3e})")));
            }
        }
        Ok(Self { graph, rank, links })
    }

    /// Rank-1 bundle from one phase per edge.
    pub fn from_phases(graph: Arc<Graph>, phases: Vec<C64>) -> Result<Self> {
        let links = phases.into_iter().map(|z| CMat::from_element(1, 1, z)).collect();
        Self::new(graph, 1, links)
    }

    /// Every link is the identity.
    pub fn trivial(graph: Arc<Graph>, rank: usize) -> Self {
        let links = vec![CMat::identity(rank, rank); graph.n_edges()];
        Self { graph, rank, links }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn links(&self) -> &[CMat] {
        &self.links
    }

    /// Unitary from the fiber over `tail(d)` to the fiber over `head(d)`.
    pub fn transport(&self, d: DirEdge) -> CMat {
        if d.forward {
            self.links[d.edge].clone()
        } else {
            self.links[d.edge].adjoint()
        }
    }

    pub fn same_graph(&self, other: &Graph) -> bool {
        std::ptr::eq(self.graph.as_ref(), other) || *self.graph == *other
    }

    /// Parallel transport along a path: `T_n ⋯ T_1`.
    pub fn path_transport(&self, path: &DiscretePath) -> Result<CMat> {
        let mut acc = CMat::identity(self.rank, self.rank);
        for d in path.dir_edges(&self.graph)? {
            acc = if d.forward { &self.links[d.edge] * acc } else { self.links[d.edge].adjoint() * acc };
        }
        Ok(acc)
    }

    pub fn holonomy(&self, loop_path: &DiscretePath) -> Result<CMat> {
        if !loop_path.is_loop() {
            return Err(Error::NotALoop { start: loop_path.start(), end: loop_path.end() });
        }
        self.path_transport(loop_path)
    }

    /// Rank-1 holonomy as a phase.
    pub fn holonomy_phase(&self, loop_path: &DiscretePath) -> Result<C64> {
        if self.rank != 1 {
            return Err(Error::Shape(format!("holonomy_phase needs rank 1, bundle has rank {}", self.rank)));
        }
        Ok(self.holonomy(loop_path)?[(0, 0)])
    }

    /// Change of fiber frames: `U'_e = g(head) · U_e · g(tail)⁻¹`.
    pub fn regauge(&self, g: &[CMat]) -> Result<Self> {
        if g.len() != self.graph.n_vertices() {
            return Err(Error::SizeMismatch { expected: self.graph.n_vertices(), found: g.len() });
        }
        let links = self
            .graph
            .edges()
            .iter()
            .zip(&self.links)
            .map(|(&[a, b], u)| &g[b] * u * g[a].adjoint())
            .collect();
        Self::new(self.shared_graph(), self.rank, links)
    }

    /// Random unitary change of frame at every vertex, returned with the gauge used.
    pub fn random_regauge<R: Rng + ?Sized>(&self, rng: &mut R) -> (Self, Vec<CMat>) {
        let g: Vec<CMat> = (0..self.graph.n_vertices())
            .map(|_| {
                if self.rank == 1 {
                    CMat::from_element(1, 1, cis(rng.random_range(0.0..std::f64::consts::TAU)))
                } else {
                    random_unitary(self.rank, rng)
                }
            })
            .collect();
        (self.regauge(&g).expect("gauge has one matrix per vertex"), g)
    }

    /// The bundle on the ordered graph whose fiber over `q̂` is the fiber over `π(q̂)`.
    pub fn pullback(&self, pair: &ConfigGraphPair) -> Result<Self> {
        pullback(self, pair)
    }

    pub fn export(&self) -> BundleExport {
        BundleExport {
            rank: self.rank,
            graph_hash: self.graph.structure_hash(),
            edges: self.graph.edges().to_vec(),
            links: self
                .links
                .iter()
                .map(|u| {
                    let mut flat = Vec::with_capacity(self.rank * self.rank);
                    for i in 0..self.rank {
                        for j in 0..self.rank {
                            flat.push([u[(i, j)].re, u[(i, j)].im]);
                        }
                    }
                    flat
                })
                .collect(),
        }
    }
}

/// JSON layout of a bundle: row-major `[re, im]` entries per edge.
#[derive(Debug, Clone, Serialize)]
pub struct BundleExport {
    pub rank: usize,
    pub graph_hash: String,
    pub edges: Vec<[usize; 2]>,
    pub links: Vec<Vec<[f64; 2]>>,
}

/// Pullback of a quotient bundle through the covering projection.
pub fn pullback(bundle: &DiscreteBundle, pair: &ConfigGraphPair) -> Result<DiscreteBundle> {
    if !bundle.same_graph(pair.quotient()) {
        return Err(Error::Shape("bundle does not live on the quotient graph of this pair".into()));
    }
    let og = pair.ordered_graph();
    let links = (0..og.n_edges())
        .map(|e| bundle.transport(pair.project_dir_edge(DirEdge { edge: e, forward: true })))
        .collect();
    Ok(DiscreteBundle { graph: pair.shared_ordered(), rank: bundle.rank, links })
}

/// Per-vertex unitaries whose columns form a basis of each fiber.
///
/// A parallel frame satisfies `F(head) = U_e · F(tail)`; its adjoint `F(v)†`
/// is then a trivialization identifying every fiber with one reference fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub matrices: Vec<CMat>,
}

impl Frame {
    pub fn identity(n_vertices: usize, rank: usize) -> Self {
        Self { matrices: vec![CMat::identity(rank, rank); n_vertices] }
    }

    /// Largest `‖F(head) − U_e F(tail)‖_F` over edges.
    pub fn parallel_residual(&self, bundle: &DiscreteBundle) -> f64 {
        if self.matrices.len() != bundle.graph().n_vertices() {
            return f64::INFINITY;
        }
        bundle
            .graph()
            .edges()
            .iter()
            .zip(bundle.links())
            .map(|(&[a, b], u)| crate::linalg::diff_norm(&self.matrices[b], &(u * &self.matrices[a])))
            .fold(0.0, f64::max)
    }

    /// `Î_v = F(v)†`: fiber coordinates to reference coordinates.
    pub fn trivialization(&self, v: usize) -> CMat {
        self.matrices[v].adjoint()
    }

    /// Phase of a rank-1 frame at `v`.
    pub fn phase(&self, v: usize) -> C64 {
        self.matrices[v][(0, 0)]
    }

    /// Multiplies every matrix by one global phase.
    pub fn rephased(&self, z: C64) -> Self {
        Self { matrices: self.matrices.iter().map(|m| m * z).collect() }
    }
}

/// A fiber vector at every vertex, stored contiguously by vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub rank: usize,
    pub values: CVec,
}

impl Section {
    pub fn zeros(n_vertices: usize, rank: usize) -> Self {
        Self { rank, values: CVec::zeros(n_vertices * rank) }
    }

    pub fn from_values(rank: usize, values: CVec) -> Result<Self> {
        if rank == 0 || !values.len().is_multiple_of(rank) {
            return Err(Error::Shape(format!("{} values do not split into rank-{rank} fibers", values.len())));
        }
        Ok(Self { rank, values })
    }

    /// Rank-1 section with value 1 at `v`.
    pub fn delta(n_vertices: usize, v: usize) -> Self {
        let mut s = Self::zeros(n_vertices, 1);
        s.values[v] = ONE;
        s
    }

    pub fn n_vertices(&self) -> usize {
        self.values.len() / self.rank
    }

    pub fn fiber(&self, v: usize) -> CVec {
        self.values.rows(v * self.rank, self.rank).into_owned()
    }

    pub fn set_fiber(&mut self, v: usize, x: &CVec) {
        self.values.rows_mut(v * self.rank, self.rank).copy_from(x);
    }

    /// `Σ_v ‖ψ(v)‖² · cell_volume`.
    pub fn norm_sqr(&self, cell_volume: f64) -> f64 {
        self.values.norm_squared() * cell_volume
    }
}
