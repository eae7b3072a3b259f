//! Unitary equivalence of triples: checking a proposed unitary, and solving
//! for one when every PVM cell has rank 1.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{Projector, QuantumTriple};
use crate::error::{Error, Result};
use crate::linalg::{diff_norm, unitarity_residual, CMat, C64, ONE};

/// A unitary with its conjugation residuals.
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    pub unitary: CMat,
    pub unitarity: f64,
    /// `‖U H₁ U⁻¹ − H₂‖_F`.
    pub hamiltonian: f64,
    /// `‖U Q₁(cell) U⁻¹ − Q₂(cell)‖_F` per cell, in the first triple's cell order.
    pub cells: Vec<(String, f64)>,
}

impl EquivalenceWitness {
    pub fn max_cell(&self) -> f64 {
        self.cells.iter().map(|c| c.1).fold(0.0, f64::max)
    }

    pub fn worst_cell(&self) -> (&str, f64) {
        self.cells
            .iter()
            .fold(("", 0.0), |acc, (l, r)| if *r > acc.1 { (l.as_str(), *r) } else { acc })
    }

    pub fn max_residual(&self) -> f64 {
        self.hamiltonian.max(self.max_cell()).max(self.unitarity)
    }
}

fn check_shapes(t1: &QuantumTriple, t2: &QuantumTriple) -> Result<Vec<usize>> {
    if t1.dim() != t2.dim() {
        return Err(Error::Shape(format!("dimensions differ: {} vs {}", t1.dim(), t2.dim())));
    }
    if t1.pvm().len() != t2.pvm().len() {
        return Err(Error::Shape(format!("cell counts differ: {} vs {}", t1.pvm().len(), t2.pvm().len())));
    }
    let index: HashMap<&str, usize> = t2.pvm().labels().into_iter().enumerate().map(|(i, l)| (l, i)).collect();
    t1.pvm()
        .labels()
        .into_iter()
        .map(|l| index.get(l).copied().ok_or_else(|| Error::Shape(format!("cell '{l}' missing from second triple"))))
        .collect()
}

/// Residuals of `u` as a candidate equivalence, without judging them.
pub fn equivalence_residuals(t1: &QuantumTriple, t2: &QuantumTriple, u: &CMat) -> Result<EquivalenceWitness> {
    let matching = check_shapes(t1, t2)?;
    let n = t1.dim();
    if u.shape() != (n, n) {
        return Err(Error::Shape(format!("unitary has shape {:?}, triples have dimension {n}", u.shape())));
    }
    // U H₁: rows of U against the sparse columns of H₁
    let mut uh = CMat::zeros(n, n);
    for (k, j, h) in t1.hamiltonian().triplets() {
        for i in 0..n {
            uh[(i, j)] += u[(i, k)] * h;
        }
    }
    let conj = uh * u.adjoint();
    let hamiltonian = diff_norm(&conj, &t2.hamiltonian().to_dense());

    let cells = (0..t1.pvm().len())
        .map(|c1| {
            let c2 = matching[c1];
            let image = u * t1.pvm().basis(c1);
            (t1.pvm().cells()[c1].label.clone(), projector_gap(&image, &t2.pvm().cells()[c2].projector, n))
        })
        .collect();
    Ok(EquivalenceWitness { unitary: u.clone(), unitarity: unitarity_residual(u), hamiltonian, cells })
}

/// `‖C C† − P‖_F`, touching only the rows where `C` or `P` is nonzero when
/// `P` is a coordinate projector.
fn projector_gap(c: &CMat, p: &Projector, n: usize) -> f64 {
    match p {
        Projector::Coordinates(idx) => {
            let support: Vec<usize> = (0..n).filter(|&i| c.row(i).iter().any(|z| z.norm_sqr() > 0.0)).collect();
            let mut in_p = vec![false; n];
            for &k in idx {
                in_p[k] = true;
            }
            let mut sq = 0.0;
            for &i in &support {
                for &j in &support {
                    let cc: C64 = c.row(i).iter().zip(c.row(j).iter()).map(|(a, b)| a * b.conj()).sum();
                    let target = if i == j && in_p[i] { ONE } else { C64::new(0.0, 0.0) };
                    sq += (cc - target).norm_sqr();
                }
            }
            let mut covered = vec![false; n];
            for &i in &support {
                covered[i] = true;
            }
            sq += idx.iter().filter(|&&k| !covered[k]).count() as f64;
            sq.sqrt()
        }
        Projector::Isometry(b) => diff_norm(&(c * c.adjoint()), &(b * b.adjoint())),
    }
}

/// Checks `U H₁ U⁻¹ = H₂` and `U Q₁(cell) U⁻¹ = Q₂(cell)` for every cell,
/// matching cells by label.
pub fn verify_equivalence(t1: &QuantumTriple, t2: &QuantumTriple, u: &CMat, tol: f64) -> Result<EquivalenceWitness> {
    let w = equivalence_residuals(t1, t2, u)?;
    let (worst_cell, cell) = w.worst_cell();
    if w.hamiltonian > tol || cell > tol || w.unitarity > tol {
        return Err(Error::NotEquivalent { hamiltonian: w.hamiltonian, worst_cell: worst_cell.to_string(), cell });
    }
    Ok(w)
}

/// Why two rank-1-cell triples cannot be equivalent.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    CellRankMismatch { cell: String, rank1: usize, rank2: usize },
    /// `⟨e_c, H e_c⟩` differs; no phase can fix a diagonal entry.
    DiagonalMismatch { cell: String, h1: f64, h2: f64 },
    /// `|⟨e_a, H e_b⟩|` differs between the triples.
    MagnitudeMismatch { cell_a: String, cell_b: String, h1: f64, h2: f64 },
    /// The phases forced along a spanning tree disagree on another coupling.
    PhaseMismatch { cell_a: String, cell_b: String, residual: f64 },
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    /// Found; `components` counts connected pieces of the coupling graph, each
    /// of which carries an independent free phase.
    Equivalent { witness: EquivalenceWitness, components: usize },
    NoEquivalence(Obstruction),
    Unsupported(String),
}

/// Searches for `U` mapping each rank-1 cell of `t1` onto the cell of `t2`
/// with the same label. Such a `U` is diagonal in the cell bases up to
/// phases `z_c`, and `U H₁ U⁻¹ = H₂` becomes `z_a h₁(a,b) z̄_b = h₂(a,b)`:
/// equal diagonals, equal magnitudes, and phases propagated along a spanning
/// tree of the couplings must close on every remaining coupling.
pub fn solve_equivalence(t1: &QuantumTriple, t2: &QuantumTriple, tol: f64) -> Result<SolveOutcome> {
    let matching = check_shapes(t1, t2)?;
    let (p1, p2) = (t1.pvm(), t2.pvm());
    let n = t1.dim();
    let labels: Vec<String> = p1.cells().iter().map(|c| c.label.clone()).collect();
    for (c1, &c2) in matching.iter().enumerate() {
        let (r1, r2) = (p1.rank(c1), p2.rank(c2));
        if r1 != r2 {
            return Ok(SolveOutcome::NoEquivalence(Obstruction::CellRankMismatch {
                cell: labels[c1].clone(),
                rank1: r1,
                rank2: r2,
            }));
        }
        if r1 != 1 {
            return Ok(SolveOutcome::Unsupported(format!(
                "cell '{}' has rank {r1}; only rank-1 cells are solved",
                labels[c1]
            )));
        }
    }
    if p1.len() != n {
        return Ok(SolveOutcome::Unsupported("rank-1 cells do not span the space".into()));
    }

    // cell bases W₁, W₂ (columns in t1's cell order) and H in those bases
    let w1 = CMat::from_fn(n, n, |i, c| p1.basis(c)[(i, 0)]);
    let w2 = CMat::from_fn(n, n, |i, c| p2.basis(matching[c])[(i, 0)]);
    let h1 = in_basis(t1, &w1);
    let h2 = in_basis(t2, &w2);
    let scale = h1.iter().chain(h2.iter()).map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let zero = 1e-13 * scale;

    for c in 0..n {
        if (h1[(c, c)] - h2[(c, c)]).norm() > tol {
            return Ok(SolveOutcome::NoEquivalence(Obstruction::DiagonalMismatch {
                cell: labels[c].clone(),
                h1: h1[(c, c)].re,
                h2: h2[(c, c)].re,
            }));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let (m1, m2) = (h1[(a, b)].norm(), h2[(a, b)].norm());
            if (m1 - m2).abs() > tol {
                return Ok(SolveOutcome::NoEquivalence(Obstruction::MagnitudeMismatch {
                    cell_a: labels[a].clone(),
                    cell_b: labels[b].clone(),
                    h1: m1,
                    h2: m2,
                }));
            }
        }
    }

    let mut z = vec![None::<C64>; n];
    let mut components = 0;
    for root in 0..n {
        if z[root].is_some() {
            continue;
        }
        components += 1;
        z[root] = Some(ONE);
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            let za = z[a].unwrap();
            for b in 0..n {
                if z[b].is_none() && h1[(a, b)].norm() > zero {
                    let (x1, x2) = (h1[(a, b)], h2[(a, b)]);
                    z[b] = Some(za * (x1 / x1.norm()) * (x2 / x2.norm()).conj());
                    queue.push_back(b);
                }
            }
        }
    }
    let z: Vec<C64> = z.into_iter().map(Option::unwrap).collect();
    for a in 0..n {
        for b in a + 1..n {
            let residual = (z[a] * h1[(a, b)] * z[b].conj() - h2[(a, b)]).norm();
            if residual > tol {
                return Ok(SolveOutcome::NoEquivalence(Obstruction::PhaseMismatch {
                    cell_a: labels[a].clone(),
                    cell_b: labels[b].clone(),
                    residual,
                }));
            }
        }
    }

    let mut wz = w2;
    for (c, zc) in z.iter().enumerate() {
        let mut col = wz.column_mut(c);
        col *= *zc;
    }
    let u = wz * w1.adjoint();
    let witness = equivalence_residuals(t1, t2, &u)?;
    Ok(SolveOutcome::Equivalent { witness, components })
}

fn in_basis(t: &QuantumTriple, w: &CMat) -> CMat {
    let n = t.dim();
    let mut hw = CMat::zeros(n, n);
    for (i, k, h) in t.hamiltonian().triplets() {
        for c in 0..n {
            hw[(i, c)] += h * w[(k, c)];
        }
    }
    w.adjoint() * hw
}
