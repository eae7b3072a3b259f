//! Potentials on configurations. Every variant is a sum of one-body and
//! two-body terms, hence symmetric under relabeling of the particles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::confspace::{ConfigGraph, ConfigGraphPair, LatticeBox};
use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    Zero,
    /// Independent uniform values in `[-strength, strength]` on each site.
    OnSiteRandom { seed: u64, strength: f64 },
    /// `strength · exp(-r / range)` for every pair at distance `r`.
    Pairwise { strength: f64, range: f64 },
    /// `½ m ω² |x - c|²` per particle, `c` the box centre.
    Harmonic { omega: f64 },
}

impl Potential {
    fn site_values(&self, lattice: &LatticeBox, params: &PhysicalParams) -> Vec<f64> {
        let n = lattice.site_count();
        match *self {
            Potential::Zero | Potential::Pairwise { .. } => vec![0.0; n],
            Potential::OnSiteRandom { seed, strength } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| rng.random_range(-strength..=strength)).collect()
            }
            Potential::Harmonic { omega } => {
                let centre: Vec<f64> =
                    lattice.sides().iter().map(|&s| (s as f64 - 1.0) * lattice.spacing() / 2.0).collect();
                (0..n)
                    .map(|s| {
                        let r2: f64 =
                            lattice.position(s).iter().zip(&centre).map(|(x, c)| (x - c) * (x - c)).sum();
                        0.5 * params.mass * omega * omega * r2
                    })
                    .collect()
            }
        }
    }

    fn pair_value(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Potential::Pairwise { strength, range } => {
                let r = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
                strength * (-r / range).exp()
            }
            _ => 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Potential::Pairwise { range, .. } if !(range > 0.0) => {
                Err(Error::InvalidParams(format!("pair range must be positive, got {range}")))
            }
            Potential::OnSiteRandom { strength, .. } if !(strength >= 0.0) => {
                Err(Error::InvalidParams(format!("on-site strength must be nonnegative, got {strength}")))
            }
            _ => Ok(()),
        }
    }

    /// Value at a tuple of sites.
    pub fn at_sites(&self, lattice: &LatticeBox, params: &PhysicalParams, sites: &[usize]) -> f64 {
        let onsite = self.site_values(lattice, params);
        self.eval(lattice, &onsite, sites)
    }

    fn eval(&self, lattice: &LatticeBox, onsite: &[f64], sites: &[usize]) -> f64 {
        let mut v: f64 = sites.iter().map(|&s| onsite[s]).sum();
        if matches!(self, Potential::Pairwise { .. }) {
            let pos: Vec<Vec<f64>> = sites.iter().map(|&s| lattice.position(s)).collect();
            for j in 0..pos.len() {
                for k in j + 1..pos.len() {
                    v += self.pair_value(&pos[j], &pos[k]);
                }
            }
        }
        v
    }

    /// Values on the vertices of an ordered graph.
    pub fn on_ordered(&self, graph: &ConfigGraph, params: &PhysicalParams) -> Result<Vec<f64>> {
        self.validate()?;
        let onsite = self.site_values(graph.lattice(), params);
        Ok((0..graph.n_vertices()).map(|v| self.eval(graph.lattice(), &onsite, graph.tuple(v))).collect())
    }

    /// Values on the vertices of a quotient graph.
    pub fn on_quotient(&self, pair: &ConfigGraphPair, params: &PhysicalParams) -> Result<Vec<f64>> {
        self.validate()?;
        let onsite = self.site_values(pair.lattice(), params);
        Ok((0..pair.n_quotient()).map(|q| self.eval(pair.lattice(), &onsite, pair.quotient_tuple(q))).collect())
    }
}

/// Largest `|V(σ·q̂) − V(q̂)|` over ordered vertices and adjacent transpositions.
pub fn symmetry_residual(graph: &ConfigGraph, values: &[f64]) -> f64 {
    let n = graph.particles();
    let mut worst = 0.0f64;
    for i in 1..n {
        let s = Permutation::transposition(n, i, i + 1).unwrap();
        for v in 0..graph.n_vertices() {
            let w = graph.permuted_vertex(v, &s);
            worst = worst.max((values[v] - values[w]).abs());
        }
    }
    worst
}

/// Errors unless `values` is a permutation-symmetric function on ordered vertices.
pub fn check_symmetric(graph: &ConfigGraph, values: &[f64]) -> Result<()> {
    if values.len() != graph.n_vertices() {
        return Err(Error::Domain(format!(
            "potential has {} values for {} vertices",
            values.len(),
            graph.n_vertices()
        )));
    }
    let r = symmetry_residual(graph, values);
    if r > 1e-12 {
        return Err(Error::SymmetryViolation { what: "potential is not permutation-symmetric".into(), residual: r });
    }
    Ok(())
}
