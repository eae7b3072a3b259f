//! Finite-dimensional quantum triples `(Hilbert space, Hamiltonian, position
//! PVM)` built from configuration graphs and bundles over them.

mod boundary;
mod dynamics;
mod equivalence;

use std::collections::HashMap;

use serde::Serialize;

pub use boundary::{d1_boundary_demo, BoundaryReport};
pub use dynamics::{born_distribution, evolve, expectation, velocity_form, Propagator, DENSE_LIMIT};
pub use equivalence::{
    equivalence_residuals, solve_equivalence, verify_equivalence, EquivalenceWitness, Obstruction, SolveOutcome,
};

use crate::bundle::{connection_laplacian, DiscreteBundle};
use crate::confspace::{ConfigGraph, ConfigGraphPair};
use crate::error::{Error, Result};
use crate::linalg::{diff_norm, isometry_residual, CMat, CVec, CsrMatrix, C64, ONE, ZERO};
use crate::params::PhysicalParams;
use crate::perm::factorial;
use crate::potential::check_symmetric;

/// Range of one PVM cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    /// Projection onto these standard basis vectors.
    Coordinates(Vec<usize>),
    /// Projection onto the span of these orthonormal columns.
    Isometry(CMat),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PvmCell {
    pub label: String,
    pub projector: Projector,
}

/// Projection-valued measure over a finite set of labelled cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Pvm {
    dim: usize,
    cells: Vec<PvmCell>,
}

/// Worst violation of each PVM axiom.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PvmResiduals {
    pub idempotence: f64,
    pub hermiticity: f64,
    pub orthogonality: f64,
    pub completeness: f64,
}

impl PvmResiduals {
    pub fn max(&self) -> f64 {
        self.idempotence.max(self.hermiticity).max(self.orthogonality).max(self.completeness)
    }
}

impl Pvm {
    pub fn new(dim: usize, cells: Vec<PvmCell>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, c) in cells.iter().enumerate() {
            if seen.insert(c.label.clone(), i).is_some() {
                return Err(Error::Shape(format!("duplicate cell label '{}'", c.label)));
            }
            match &c.projector {
                Projector::Coordinates(idx) => {
                    if let Some(&k) = idx.iter().find(|&&k| k >= dim) {
                        return Err(Error::Shape(format!("cell '{}' index {k} exceeds dimension {dim}", c.label)));
                    }
                }
                Projector::Isometry(b) => {
                    if b.nrows() != dim {
                        return Err(Error::Shape(format!("cell '{}' has {} rows, expected {dim}", c.label, b.nrows())));
                    }
                }
            }
        }
        Ok(Self { dim, cells })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[PvmCell] {
        &self.cells
    }

    pub fn labels(&self) -> Vec<&str> {
        self.cells.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.label == label)
    }

    pub fn rank(&self, cell: usize) -> usize {
        match &self.cells[cell].projector {
            Projector::Coordinates(idx) => idx.len(),
            Projector::Isometry(b) => b.ncols(),
        }
    }

    /// Orthonormal basis of the cell's range as columns.
    pub fn basis(&self, cell: usize) -> CMat {
        match &self.cells[cell].projector {
            Projector::Coordinates(idx) => {
                let mut b = CMat::zeros(self.dim, idx.len());
                for (j, &k) in idx.iter().enumerate() {
                    b[(k, j)] = ONE;
                }
                b
            }
            Projector::Isometry(b) => b.clone(),
        }
    }

    pub fn matrix(&self, cell: usize) -> CMat {
        let b = self.basis(cell);
        &b * b.adjoint()
    }

    pub fn apply(&self, cell: usize, psi: &CVec) -> CVec {
        match &self.cells[cell].projector {
            Projector::Coordinates(idx) => {
                let mut out = CVec::zeros(self.dim);
                for &k in idx {
                    out[k] = psi[k];
                }
                out
            }
            Projector::Isometry(b) => b * (b.adjoint() * psi),
        }
    }

    /// `⟨ψ|Q(cell)|ψ⟩`.
    pub fn weight(&self, cell: usize, psi: &CVec) -> f64 {
        match &self.cells[cell].projector {
            Projector::Coordinates(idx) => idx.iter().map(|&k| psi[k].norm_sqr()).sum(),
            Projector::Isometry(b) => (b.adjoint() * psi).norm_squared(),
        }
    }

    /// `Σ f(cell) Q(cell) ψ`.
    pub fn multiply(&self, f: &[f64], psi: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (cell, &fc) in f.iter().enumerate() {
            out += self.apply(cell, psi) * C64::from(fc);
        }
        out
    }

    /// Axiom residuals. Coordinate cells are checked structurally; any
    /// isometry cell triggers a dense check.
    pub fn axiom_residuals(&self) -> PvmResiduals {
        let all_coordinates = self.cells.iter().all(|c| matches!(c.projector, Projector::Coordinates(_)));
        if all_coordinates {
            let mut count = vec![0usize; self.dim];
            for c in &self.cells {
                if let Projector::Coordinates(idx) = &c.projector {
                    for &k in idx {
                        count[k] += 1;
                    }
                }
            }
            // a coordinate hit twice breaks orthogonality, a coordinate never hit breaks completeness
            let doubled: usize = count.iter().map(|&c| c.saturating_sub(1)).sum();
            let missing = count.iter().filter(|&&c| c == 0).count();
            return PvmResiduals {
                idempotence: 0.0,
                hermiticity: 0.0,
                orthogonality: (doubled as f64).sqrt(),
                completeness: ((doubled + missing) as f64).sqrt(),
            };
        }
        let mut res = PvmResiduals { idempotence: 0.0, hermiticity: 0.0, orthogonality: 0.0, completeness: 0.0 };
        let mut total = CMat::zeros(self.dim, self.dim);
        let bases: Vec<CMat> = (0..self.len()).map(|i| self.basis(i)).collect();
        for (i, b) in bases.iter().enumerate() {
            let p = b * b.adjoint();
            res.idempotence = res.idempotence.max(diff_norm(&(&p * &p), &p));
            res.hermiticity = res.hermiticity.max(diff_norm(&p, &p.adjoint()));
            res.idempotence = res.idempotence.max(isometry_residual(b));
            for b2 in &bases[i + 1..] {
                res.orthogonality = res.orthogonality.max((b.adjoint() * b2).norm());
            }
            total += p;
        }
        res.completeness = diff_norm(&total, &CMat::identity(self.dim, self.dim));
        res
    }
}

/// Hilbert space `C^dim`, Hamiltonian, position PVM.
#[derive(Debug, Clone)]
pub struct QuantumTriple {
    hamiltonian: CsrMatrix,
    pvm: Pvm,
}

impl QuantumTriple {
    pub fn new(hamiltonian: CsrMatrix, pvm: Pvm) -> Result<Self> {
        if hamiltonian.nrows() != hamiltonian.ncols() || hamiltonian.nrows() != pvm.dim() {
            return Err(Error::Shape(format!(
                "Hamiltonian is {}x{}, PVM acts on dimension {}",
                hamiltonian.nrows(),
                hamiltonian.ncols(),
                pvm.dim()
            )));
        }
        let r = hamiltonian.hermiticity_residual();
        if r > 1e-12 {
            return Err(Error::Invariant(format!("Hamiltonian is not Hermitian (residual {r:.3e})")));
        }
        Ok(Self { hamiltonian, pvm })
    }

    pub fn dim(&self) -> usize {
        self.pvm.dim()
    }

    pub fn hamiltonian(&self) -> &CsrMatrix {
        &self.hamiltonian
    }

    pub fn pvm(&self) -> &Pvm {
        &self.pvm
    }

    /// `(U H U⁻¹, U Q U⁻¹)`: the same triple in new coordinates.
    pub fn conjugated(&self, u: &CMat) -> Result<Self> {
        if u.shape() != (self.dim(), self.dim()) {
            return Err(Error::Shape(format!("unitary has shape {:?}, triple dimension {}", u.shape(), self.dim())));
        }
        let h = u * self.hamiltonian.to_dense() * u.adjoint();
        let h = (&h + h.adjoint()) * C64::from(0.5);
        let cells = self
            .pvm
            .cells()
            .iter()
            .enumerate()
            .map(|(i, c)| PvmCell { label: c.label.clone(), projector: Projector::Isometry(u * self.pvm.basis(i)) })
            .collect();
        Self::new(CsrMatrix::from_dense(&h), Pvm::new(self.dim(), cells)?)
    }

    /// Same PVM, new Hamiltonian.
    pub fn with_hamiltonian(&self, h: CsrMatrix) -> Result<Self> {
        Self::new(h, self.pvm.clone())
    }

    pub fn spectrum(&self) -> Vec<f64> {
        crate::linalg::eigvalsh(&self.hamiltonian.to_dense())
    }

    pub fn export(&self) -> TripleExport {
        let h = self.hamiltonian.to_dense();
        TripleExport {
            dim: self.dim(),
            hamiltonian: (0..self.dim()).map(|i| (0..self.dim()).map(|j| [h[(i, j)].re, h[(i, j)].im]).collect()).collect(),
            cells: self
                .pvm
                .cells()
                .iter()
                .map(|c| CellExport {
                    label: c.label.clone(),
                    indices: match &c.projector {
                        Projector::Coordinates(idx) => Some(idx.clone()),
                        Projector::Isometry(_) => None,
                    },
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleExport {
    pub dim: usize,
    pub hamiltonian: Vec<Vec<[f64; 2]>>,
    pub cells: Vec<CellExport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellExport {
    pub label: String,
    /// Coordinate indices; absent for cells given by a general isometry.
    pub indices: Option<Vec<usize>>,
}

/// `L²` of a bundle over the quotient: `H` its connection Laplacian, one PVM
/// cell per quotient vertex projecting onto the fiber over it.
pub fn make_bundle_triple(
    pair: &ConfigGraphPair,
    bundle: &DiscreteBundle,
    potential: &[f64],
    params: &PhysicalParams,
) -> Result<QuantumTriple> {
    params.check_lattice(pair.lattice())?;
    if !bundle.same_graph(pair.quotient()) {
        return Err(Error::Shape("bundle does not live on the quotient graph of this pair".into()));
    }
    let h = connection_laplacian(bundle, potential, params)?;
    let r = bundle.rank();
    let cells = (0..pair.n_quotient())
        .map(|q| PvmCell { label: pair.quotient_label(q), projector: Projector::Coordinates((q * r..(q + 1) * r).collect()) })
        .collect();
    QuantumTriple::new(h, Pvm::new(pair.n_quotient() * r, cells)?)
}

/// Distinguishable particles on the ordered graph, one cell per ordered vertex.
pub fn make_ordered_triple(graph: &ConfigGraph, potential: &[f64], params: &PhysicalParams) -> Result<QuantumTriple> {
    params.check_lattice(graph.lattice())?;
    let h = ordered_hamiltonian(graph, potential, params)?;
    let lat = graph.lattice();
    let cells = (0..graph.n_vertices())
        .map(|v| {
            let sites: Vec<String> = graph.tuple(v).iter().map(|&s| lat.format_site(s)).collect();
            PvmCell { label: format!("({})", sites.join(",")), projector: Projector::Coordinates(vec![v]) }
        })
        .collect();
    QuantumTriple::new(h, Pvm::new(graph.n_vertices(), cells)?)
}

/// Hopping Hamiltonian of the ordered graph with a per-vertex potential.
pub fn ordered_hamiltonian(graph: &ConfigGraph, potential: &[f64], params: &PhysicalParams) -> Result<CsrMatrix> {
    let trivial = DiscreteBundle::trivial(graph.shared_graph(), 1);
    connection_laplacian(&trivial, potential, params)
}

/// Exchange symmetry of wave functions on the ordered graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Anti,
    Sym,
}

impl Symmetry {
    pub fn sign(self, sigma_sign: i32) -> f64 {
        match self {
            Symmetry::Anti => sigma_sign as f64,
            Symmetry::Sym => 1.0,
        }
    }
}

/// Orthonormal basis of the (anti)symmetric subspace of functions on an
/// ordered graph: one normalized (anti)symmetrized delta per `S_N` orbit.
///
/// Columns follow the lexicographic order of sorted representatives, which on
/// collision-free graphs is the quotient vertex order. With collisions
/// retained, a symmetric orbit with stabilizer `S` has `N!/|S|` elements and
/// coefficient `1/√(N!/|S|)`; antisymmetric combinations vanish on such orbits,
/// which are dropped.
#[derive(Debug, Clone)]
pub struct OrbitBasis {
    symmetry: Symmetry,
    /// `(column, coefficient)` for each ordered vertex, `None` if outside the subspace.
    entries: Vec<Option<(usize, C64)>>,
    /// Sorted representative (an ordered vertex) of each column.
    representatives: Vec<usize>,
    labels: Vec<String>,
    orbit_sizes: Vec<usize>,
}

impl OrbitBasis {
    pub fn new(graph: &ConfigGraph, symmetry: Symmetry) -> Self {
        let n = graph.particles();
        let lat = graph.lattice();
        let mut representatives = Vec::new();
        let mut column_of: HashMap<Vec<usize>, usize> = HashMap::new();
        for v in 0..graph.n_vertices() {
            let t = graph.tuple(v);
            let sorted = t.windows(2).all(|w| w[0] <= w[1]);
            let collision = t.windows(2).any(|w| w[0] == w[1]);
            if sorted && !(collision && symmetry == Symmetry::Anti) {
                column_of.insert(t.to_vec(), representatives.len());
                representatives.push(v);
            }
        }
        let mut orbit_sizes = vec![0usize; representatives.len()];
        let mut members: Vec<Option<(usize, f64)>> = vec![None; graph.n_vertices()];
        let mut scratch = vec![0usize; n];
        for v in 0..graph.n_vertices() {
            scratch.copy_from_slice(graph.tuple(v));
            let sign = sort_sign(&mut scratch);
            if let Some(&col) = column_of.get(&scratch) {
                orbit_sizes[col] += 1;
                members[v] = Some((col, symmetry.sign(sign)));
            }
        }
        debug_assert!(orbit_sizes.iter().all(|&s| factorial(n).is_multiple_of(s)));
        let entries = members
            .into_iter()
            .map(|m| m.map(|(col, s)| (col, C64::from(s / (orbit_sizes[col] as f64).sqrt()))))
            .collect();
        let labels = representatives
            .iter()
            .map(|&v| {
                let sites: Vec<String> = graph.tuple(v).iter().map(|&s| lat.format_site(s)).collect();
                format!("{{{}}}", sites.join(","))
            })
            .collect();
        Self { symmetry, entries, representatives, labels, orbit_sizes }
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, v: usize) -> Option<(usize, C64)> {
        self.entries[v]
    }

    pub fn representative(&self, col: usize) -> usize {
        self.representatives[col]
    }

    pub fn label(&self, col: usize) -> &str {
        &self.labels[col]
    }

    pub fn orbit_size(&self, col: usize) -> usize {
        self.orbit_sizes[col]
    }

    /// The basis as an `ambient × len` isometry with one nonzero per row.
    pub fn matrix(&self) -> CsrMatrix {
        let t = self
            .entries
            .iter()
            .enumerate()
            .filter_map(|(v, e)| e.map(|(col, c)| (v, col, c)))
            .collect();
        CsrMatrix::from_triplets(self.ambient_dim(), self.len(), t)
    }

    /// Coordinates in this basis of an ordered function (the adjoint of [`OrbitBasis::embed`]).
    pub fn coordinates(&self, f: &CVec) -> CVec {
        let mut out = CVec::zeros(self.len());
        for (v, e) in self.entries.iter().enumerate() {
            if let Some((col, c)) = e {
                out[*col] += c.conj() * f[v];
            }
        }
        out
    }

    pub fn embed(&self, x: &CVec) -> CVec {
        CVec::from_iterator(self.ambient_dim(), self.entries.iter().map(|e| e.map_or(ZERO, |(col, c)| c * x[col])))
    }

    /// `B† H B`, using that `B` has one nonzero per row.
    pub fn compress(&self, h: &CsrMatrix) -> CsrMatrix {
        let mut triplets = Vec::new();
        for (x, ex) in self.entries.iter().enumerate() {
            let Some((i, cx)) = ex else { continue };
            for (y, hxy) in h.row(x) {
                if let Some((j, cy)) = self.entries[y] {
                    triplets.push((*i, j, cx.conj() * hxy * cy));
                }
            }
        }
        CsrMatrix::from_triplets(self.len(), self.len(), triplets)
    }
}

fn sort_sign(v: &mut [usize]) -> i32 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// Triple on the (anti)symmetric subspace of the ordered graph: `H` restricted
/// to the subspace, one rank-1 cell per orbit. Cell labels coincide with the
/// quotient vertex labels of [`make_bundle_triple`].
pub fn make_subspace_triple(
    graph: &ConfigGraph,
    potential: &[f64],
    params: &PhysicalParams,
    symmetry: Symmetry,
) -> Result<(QuantumTriple, OrbitBasis)> {
    params.check_lattice(graph.lattice())?;
    check_symmetric(graph, potential)?;
    let h = ordered_hamiltonian(graph, potential, params)?;
    let basis = OrbitBasis::new(graph, symmetry);
    let hs = basis.compress(&h);
    // the two triangle halves come from different sums; average out rounding
    let dense = hs.to_dense();
    let hs = CsrMatrix::from_dense(&((&dense + dense.adjoint()) * C64::from(0.5)));
    let cells = (0..basis.len())
        .map(|c| PvmCell { label: basis.label(c).to_string(), projector: Projector::Coordinates(vec![c]) })
        .collect();
    let triple = QuantumTriple::new(hs, Pvm::new(basis.len(), cells)?)?;
    Ok((triple, basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{bundle_from_character, Character};
    use crate::confspace::{build_ordered_graph, build_ordered_graph_with_collisions, build_pair, LatticeBox};
    use crate::linalg::{random_unit_cvec, random_unitary, spectrum_gap};
    use crate::potential::Potential;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pvm_axioms_for_bundle_triple() {
        let pair = build_pair(&LatticeBox::open(&[3, 3]).unwrap(), 2).unwrap();
        let b = bundle_from_character(&pair, Character::Alternating);
        let p = PhysicalParams::default();
        let v = Potential::Harmonic { omega: 0.5 }.on_quotient(&pair, &p).unwrap();
        let t = make_bundle_triple(&pair, &b, &v, &p).unwrap();
        assert_eq!(t.pvm().axiom_residuals().max(), 0.0);
        assert_eq!(t.dim(), 36);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = random_unitary(36, &mut rng);
        let c = t.conjugated(&u).unwrap();
        assert!(c.pvm().axiom_residuals().max() < 1e-12);
    }

    #[test]
    fn broken_pvm_detected() {
        let cells = vec![
            PvmCell { label: "a".into(), projector: Projector::Coordinates(vec![0, 1]) },
            PvmCell { label: "b".into(), projector: Projector::Coordinates(vec![1]) },
        ];
        let pvm = Pvm::new(3, cells).unwrap();
        let r = pvm.axiom_residuals();
        assert!(r.orthogonality > 0.0 && r.completeness > 0.0);
        let dup = vec![
            PvmCell { label: "a".into(), projector: Projector::Coordinates(vec![0]) },
            PvmCell { label: "a".into(), projector: Projector::Coordinates(vec![1]) },
        ];
        assert!(Pvm::new(2, dup).is_err());
    }

    #[test]
    fn subspace_dimensions_and_labels() {
        let pair = build_pair(&LatticeBox::open(&[3, 3]).unwrap(), 2).unwrap();
        let p = PhysicalParams::default();
        let v = vec![0.0; pair.n_ordered()];
        let (anti, basis) = make_subspace_triple(pair.ordered(), &v, &p, Symmetry::Anti).unwrap();
        assert_eq!(anti.dim(), pair.n_quotient());
        for q in 0..pair.n_quotient() {
            assert_eq!(basis.label(q), pair.quotient_label(q));
            assert_eq!(basis.representative(q), pair.canonical_vertex(q));
        }
        let b = basis.matrix().to_dense();
        assert!(isometry_residual(&b) < 1e-14);
    }

    #[test]
    fn single_particle_subspace_is_ordered_triple() {
        let lat = LatticeBox::open(&[4, 3]).unwrap();
        let g = build_ordered_graph(&lat, 1).unwrap();
        let p = PhysicalParams::default();
        let v = Potential::OnSiteRandom { seed: 3, strength: 1.0 }.on_ordered(&g, &p).unwrap();
        let ordered = make_ordered_triple(&g, &v, &p).unwrap();
        for sym in [Symmetry::Anti, Symmetry::Sym] {
            let (sub, _) = make_subspace_triple(&g, &v, &p, sym).unwrap();
            assert_eq!(sub.hamiltonian().to_dense(), ordered.hamiltonian().to_dense());
            assert_eq!(sub.pvm().len(), ordered.pvm().len());
        }
    }

    #[test]
    fn anti_and_sym_spectra_partition_ordered_spectrum() {
        let pair = build_pair(&LatticeBox::open(&[3, 3]).unwrap(), 2).unwrap();
        let p = PhysicalParams::default();
        let v = Potential::Pairwise { strength: 1.0, range: 1.0 }.on_ordered(pair.ordered(), &p).unwrap();
        let full = make_ordered_triple(pair.ordered(), &v, &p).unwrap().spectrum();
        let (anti, _) = make_subspace_triple(pair.ordered(), &v, &p, Symmetry::Anti).unwrap();
        let (sym, _) = make_subspace_triple(pair.ordered(), &v, &p, Symmetry::Sym).unwrap();
        let mut both = anti.spectrum();
        both.extend(sym.spectrum());
        both.sort_by(|a, b| a.total_cmp(b));
        assert!(spectrum_gap(&full, &both) < 1e-10);
    }

    #[test]
    fn asymmetric_potential_rejected() {
        let pair = build_pair(&LatticeBox::open(&[3]).unwrap(), 2).unwrap();
        let v: Vec<f64> = (0..pair.n_ordered()).map(|i| i as f64).collect();
        let r = make_subspace_triple(pair.ordered(), &v, &PhysicalParams::default(), Symmetry::Anti);
        assert!(matches!(r, Err(Error::SymmetryViolation { .. })));
    }

    #[test]
    fn collision_orbits() {
        let lat = LatticeBox::open(&[4]).unwrap();
        let g = build_ordered_graph_with_collisions(&lat, 2).unwrap();
        let sym = OrbitBasis::new(&g, Symmetry::Sym);
        let anti = OrbitBasis::new(&g, Symmetry::Anti);
        assert_eq!(sym.len(), 10);
        assert_eq!(anti.len(), 6);
        assert!(isometry_residual(&sym.matrix().to_dense()) < 1e-14);
        let diag = (0..sym.len()).filter(|&c| sym.orbit_size(c) == 1).count();
        assert_eq!(diag, 4);
    }

    #[test]
    fn embed_coordinates_round_trip() {
        let pair = build_pair(&LatticeBox::open(&[3, 3]).unwrap(), 3).unwrap();
        let basis = OrbitBasis::new(pair.ordered(), Symmetry::Anti);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = random_unit_cvec(basis.len(), &mut rng);
        let f = basis.embed(&x);
        assert!((basis.coordinates(&f) - &x).norm() < 1e-14);
        assert!((f.norm() - 1.0).abs() < 1e-14);
    }
}
