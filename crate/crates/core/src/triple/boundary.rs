//! Two particles on a line with coinciding positions allowed: the
//! antisymmetric and symmetric sectors against boundary-value problems on the
//! fundamental domain `x₁ ≤ x₂`.

use std::collections::HashMap;

use serde::Serialize;

use super::{make_subspace_triple, Symmetry};
use crate::confspace::{build_ordered_graph_with_collisions, LatticeBox};
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, spectrum_gap, CMat, C64};
use crate::params::PhysicalParams;
use crate::perm::factorial;
use crate::potential::Potential;

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub sites: usize,
    pub particles: usize,
    pub anti_spectrum: Vec<f64>,
    pub sym_spectrum: Vec<f64>,
    /// Fundamental domain without the diagonal (antisymmetric functions vanish there).
    pub dirichlet_spectrum: Vec<f64>,
    /// Fundamental domain with the diagonal, boundary hops reweighted.
    pub neumann_spectrum: Vec<f64>,
    pub anti_gap: f64,
    pub sym_gap: f64,
}

/// Builds both sectors by projecting the ordered Hamiltonian onto orbit
/// bases, and separately builds fundamental-domain matrices by counting hops
/// out of each sorted tuple. Hops that leave the domain are folded back by
/// sorting, with the sorting sign in the antisymmetric case. Hops into a
/// coincidence are dropped for the antisymmetric case; for the symmetric case
/// a hop between orbits of sizes `A` and `B` carries weight `√(A/B)` per
/// lattice hop, giving `√2` on edges touching the diagonal.
pub fn d1_boundary_demo(
    lattice: &LatticeBox,
    particles: usize,
    potential: &Potential,
    params: &PhysicalParams,
) -> Result<BoundaryReport> {
    if lattice.dim() != 1 {
        return Err(Error::Dimension(format!("boundary demo needs d = 1, got d = {}", lattice.dim())));
    }
    if particles == 0 {
        return Err(Error::InvalidConfig("boundary demo needs at least one particle".into()));
    }
    params.check_lattice(lattice)?;
    let graph = build_ordered_graph_with_collisions(lattice, particles)?;
    let v = potential.on_ordered(&graph, params)?;
    let (anti, _) = make_subspace_triple(&graph, &v, params, Symmetry::Anti)?;
    let (sym, _) = make_subspace_triple(&graph, &v, params, Symmetry::Sym)?;
    let anti_spectrum = anti.spectrum();
    let sym_spectrum = sym.spectrum();

    let dirichlet_spectrum = eigvalsh(&fundamental_domain(lattice, particles, potential, params, Symmetry::Anti));
    let neumann_spectrum = eigvalsh(&fundamental_domain(lattice, particles, potential, params, Symmetry::Sym));
    Ok(BoundaryReport {
        sites: lattice.site_count(),
        particles,
        anti_gap: spectrum_gap(&anti_spectrum, &dirichlet_spectrum),
        sym_gap: spectrum_gap(&sym_spectrum, &neumann_spectrum),
        anti_spectrum,
        sym_spectrum,
        dirichlet_spectrum,
        neumann_spectrum,
    })
}

/// Orbit size of a sorted tuple: `N!` over the product of multiplicity factorials.
fn orbit_size(sorted: &[usize]) -> usize {
    let mut stab = 1;
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            stab *= factorial(run);
            run = 1;
        }
    }
    stab *= factorial(run);
    factorial(sorted.len()) / stab
}

fn fundamental_domain(
    lattice: &LatticeBox,
    n: usize,
    potential: &Potential,
    params: &PhysicalParams,
    symmetry: Symmetry,
) -> CMat {
    let sites = lattice.site_count();
    let strict = symmetry == Symmetry::Anti;
    // sorted tuples, lexicographic
    let mut domain: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        let ok = cur.windows(2).all(|w| if strict { w[0] < w[1] } else { w[0] <= w[1] });
        if ok {
            domain.push(cur.clone());
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < sites {
                break;
            }
            cur[pos] = 0;
        }
        if pos == 0 && cur[0] == 0 {
            break;
        }
    }
    let index: HashMap<Vec<usize>, usize> = domain.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    let t = params.hopping();
    let mut h = CMat::zeros(domain.len(), domain.len());
    for (i, tuple) in domain.iter().enumerate() {
        let mut degree = 0usize;
        for k in 0..n {
            for nb in lattice.neighbors(tuple[k]) {
                degree += 1;
                let mut moved = tuple.clone();
                moved[k] = nb;
                let mut sign = 1.0;
                for a in 1..n {
                    let mut b = a;
                    while b > 0 && moved[b - 1] > moved[b] {
                        moved.swap(b - 1, b);
                        sign = -sign;
                        b -= 1;
                    }
                }
                let Some(&j) = index.get(&moved) else { continue };
                let weight = match symmetry {
                    Symmetry::Anti => sign,
                    Symmetry::Sym => (orbit_size(tuple) as f64 / orbit_size(&moved) as f64).sqrt(),
                };
                h[(j, i)] -= C64::from(t * weight);
            }
        }
        h[(i, i)] += C64::from(t * degree as f64 + potential.at_sites(lattice, params, tuple));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&[1, 2]), 2);
        assert_eq!(orbit_size(&[3, 3]), 1);
        assert_eq!(orbit_size(&[1, 1, 2]), 3);
        assert_eq!(orbit_size(&[0, 1, 2]), 6);
    }

    #[test]
    fn six_site_line() {
        let lat = LatticeBox::open(&[6]).unwrap();
        let p = PhysicalParams::default();
        let r = d1_boundary_demo(&lat, 2, &Potential::Zero, &p).unwrap();
        assert_eq!(r.anti_spectrum.len(), 15);
        assert_eq!(r.sym_spectrum.len(), 21);
        assert!(r.anti_gap < 1e-10, "{}", r.anti_gap);
        assert!(r.sym_gap < 1e-10, "{}", r.sym_gap);
    }

    #[test]
    fn single_particle_sectors_coincide() {
        let lat = LatticeBox::open(&[5]).unwrap();
        let p = PhysicalParams::default();
        let r = d1_boundary_demo(&lat, 1, &Potential::Harmonic { omega: 1.0 }, &p).unwrap();
        assert!(spectrum_gap(&r.anti_spectrum, &r.sym_spectrum) < 1e-12);
        assert!(r.anti_gap < 1e-12 && r.sym_gap < 1e-12);
    }

    #[test]
    fn with_potential_and_three_particles() {
        let lat = LatticeBox::open(&[5]).unwrap();
        let p = PhysicalParams::default();
        let pot = Potential::Pairwise { strength: 0.8, range: 1.2 };
        let r = d1_boundary_demo(&lat, 3, &pot, &p).unwrap();
        assert!(r.anti_gap < 1e-10 && r.sym_gap < 1e-10);
    }

    #[test]
    fn rejects_higher_dimensions() {
        let lat = LatticeBox::open(&[3, 3]).unwrap();
        let r = d1_boundary_demo(&lat, 2, &Potential::Zero, &PhysicalParams::default());
        assert!(matches!(r, Err(Error::Dimension(_))));
    }
}
