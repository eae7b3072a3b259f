//! Configuration space of a variable number of identical particles: the
//! disjoint union of the `N`-particle unordered configuration graphs, and the
//! sector-wise identification of its sections with (anti)symmetric functions.

use serde::Serialize;

use crate::bundle::{bundle_from_character, Character, Section};
use crate::confspace::{build_pair, ConfigGraphPair, LatticeBox};
use crate::error::{Error, Result};
use crate::iso::{Correspondence, OrderedFunction};
use crate::linalg::{cis, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistics {
    Fermi,
    Bose,
}

/// Sectors `N = 0..=N_max` over one lattice box; sector 0 is a single point.
#[derive(Debug, Clone)]
pub struct GammaSpace {
    lattice: LatticeBox,
    sectors: Vec<ConfigGraphPair>,
}

pub fn build_gamma(lattice: &LatticeBox, n_max: usize) -> Result<GammaSpace> {
    let sites = lattice.site_count();
    if n_max > sites {
        return Err(Error::Capacity { sites, particles: n_max });
    }
    let sectors = (0..=n_max).map(|n| build_pair(lattice, n)).collect::<Result<_>>()?;
    Ok(GammaSpace { lattice: lattice.clone(), sectors })
}

impl GammaSpace {
    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn n_max(&self) -> usize {
        self.sectors.len() - 1
    }

    pub fn sector(&self, n: usize) -> &ConfigGraphPair {
        &self.sectors[n]
    }

    pub fn sector_size(&self, n: usize) -> usize {
        self.sectors[n].n_quotient()
    }

    pub fn sector_sizes(&self) -> Vec<usize> {
        (0..=self.n_max()).map(|n| self.sector_size(n)).collect()
    }

    /// Measure of one point of sector `n`: `a^{N d}`.
    pub fn point_measure(&self, n: usize) -> f64 {
        self.lattice.cell_volume(n)
    }

    pub fn sector_measure(&self, n: usize) -> f64 {
        self.point_measure(n) * self.sector_size(n) as f64
    }

    pub fn total_measure(&self) -> f64 {
        (0..=self.n_max()).map(|n| self.sector_measure(n)).sum()
    }
}

/// One section per sector, each with a phase `θ_N` applied on assembly.
#[derive(Debug, Clone)]
pub struct SectorState {
    pub sections: Vec<Section>,
    pub phases: Vec<f64>,
}

impl SectorState {
    pub fn new(gamma: &GammaSpace, sections: Vec<Section>, phases: Vec<f64>) -> Result<Self> {
        let state = Self { sections, phases };
        state.check(gamma)?;
        Ok(state)
    }

    /// The same sections with all phases zero.
    pub fn unphased(gamma: &GammaSpace, sections: Vec<Section>) -> Result<Self> {
        let phases = vec![0.0; sections.len()];
        Self::new(gamma, sections, phases)
    }

    /// All sectors empty except sector 0, which holds `amplitude`.
    pub fn vacuum(gamma: &GammaSpace, amplitude: C64) -> Self {
        let mut sections: Vec<Section> = gamma.sector_sizes().iter().map(|&s| Section::zeros(s, 1)).collect();
        sections[0].values[0] = amplitude;
        Self { phases: vec![0.0; sections.len()], sections }
    }

    fn check(&self, gamma: &GammaSpace) -> Result<()> {
        let expected = gamma.n_max() + 1;
        for found in [self.sections.len(), self.phases.len()] {
            if found != expected {
                return Err(Error::SizeMismatch { expected, found });
            }
        }
        for (n, s) in self.sections.iter().enumerate() {
            if s.rank != 1 || s.n_vertices() != gamma.sector_size(n) {
                return Err(Error::Shape(format!(
                    "sector {n} expects a line-bundle section on {} points, got rank {} with {} values",
                    gamma.sector_size(n),
                    s.rank,
                    s.values.len()
                )));
            }
        }
        Ok(())
    }

    pub fn sector_norms_sqr(&self, gamma: &GammaSpace) -> Vec<f64> {
        self.sections.iter().enumerate().map(|(n, s)| s.norm_sqr(gamma.point_measure(n))).collect()
    }

    pub fn norm_sqr(&self, gamma: &GammaSpace) -> f64 {
        self.sector_norms_sqr(gamma).iter().sum()
    }

    /// `|ψ(q)|²` per point, sector by sector.
    pub fn born_densities(&self) -> Vec<Vec<f64>> {
        self.sections.iter().map(|s| s.values.iter().map(|v| v.norm_sqr()).collect()).collect()
    }
}

/// Applies `e^{iθ_N} U_N` in every sector. Fermionic sectors use the
/// alternating line bundle and its canonical parallel frame; bosonic ones the
/// trivial bundle with the constant frame.
pub fn assemble_fock(gamma: &GammaSpace, state: &SectorState, kind: Statistics) -> Result<Vec<OrderedFunction>> {
    state.check(gamma)?;
    gamma
        .sectors
        .iter()
        .zip(&state.sections)
        .zip(&state.phases)
        .map(|((pair, section), &theta)| {
            let u = match kind {
                Statistics::Fermi => Correspondence::new(pair, &bundle_from_character(pair, Character::Alternating))?,
                Statistics::Bose => Correspondence::bosonic(pair),
            };
            let mut f = u.apply(section)?;
            f.values *= cis(theta);
            Ok(f)
        })
        .collect()
}

pub fn fock_norm_sqr(gamma: &GammaSpace, functions: &[OrderedFunction]) -> f64 {
    functions.iter().enumerate().map(|(n, f)| f.norm_sqr(gamma.point_measure(n))).sum()
}

/// `Σ_{q̂ over q} |f(q̂)|²` per unordered point: the Born density pushed down to the quotient.
pub fn projected_densities(gamma: &GammaSpace, functions: &[OrderedFunction]) -> Vec<Vec<f64>> {
    functions
        .iter()
        .enumerate()
        .map(|(n, f)| {
            let pair = gamma.sector(n);
            (0..pair.n_quotient())
                .map(|q| pair.preimages(q).iter().map(|&v| f.at(v).norm_squared()).sum())
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorExport {
    pub sector: usize,
    /// `[re, im]` per ordered configuration, in vertex order.
    pub values: Vec<[f64; 2]>,
}

pub fn export_sectors(functions: &[OrderedFunction]) -> Vec<SectorExport> {
    functions
        .iter()
        .enumerate()
        .map(|(n, f)| SectorExport { sector: n, values: f.values.iter().map(|v| [v.re, v.im]).collect() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::exchange_residual;
    use crate::linalg::random_cvec;
    use crate::triple::Symmetry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(gamma: &GammaSpace, rng: &mut ChaCha8Rng) -> SectorState {
        let sections = gamma
            .sector_sizes()
            .iter()
            .map(|&s| Section::from_values(1, random_cvec(s, rng)).unwrap())
            .collect();
        let phases = (0..=gamma.n_max()).map(|_| rng.random_range(0.0..6.0)).collect();
        SectorState::new(gamma, sections, phases).unwrap()
    }

    #[test]
    fn sector_counts_and_measure() {
        let lat = LatticeBox::open(&[3, 3]).unwrap().with_spacing(0.5).unwrap();
        let g = build_gamma(&lat, 2).unwrap();
        assert_eq!(g.sector_sizes(), vec![1, 9, 36]);
        let expected = 1.0 + 0.25 * 9.0 + 0.0625 * 36.0;
        assert!((g.total_measure() - expected).abs() < 1e-15);
        let single = build_gamma(&lat, 0).unwrap();
        assert_eq!(single.sector_sizes(), vec![1]);
        assert_eq!(single.total_measure(), 1.0);
    }

    #[test]
    fn capacity_is_checked() {
        let lat = LatticeBox::open(&[2]).unwrap();
        assert!(matches!(build_gamma(&lat, 3), Err(Error::Capacity { .. })));
    }

    #[test]
    fn vacuum_passes_through() {
        let lat = LatticeBox::open(&[3, 3]).unwrap();
        let g = build_gamma(&lat, 2).unwrap();
        let amp = C64::new(0.6, -0.8);
        for kind in [Statistics::Fermi, Statistics::Bose] {
            let out = assemble_fock(&g, &SectorState::vacuum(&g, amp), kind).unwrap();
            assert_eq!(out[0].values[0], amp);
            assert!(out[1..].iter().all(|f| f.values.norm() == 0.0));
        }
    }

    #[test]
    fn norms_densities_and_symmetry() {
        let lat = LatticeBox::open(&[3, 3]).unwrap();
        let g = build_gamma(&lat, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for kind in [Statistics::Fermi, Statistics::Bose] {
            let state = random_state(&g, &mut rng);
            let out = assemble_fock(&g, &state, kind).unwrap();
            let total = state.norm_sqr(&g);
            assert!((fock_norm_sqr(&g, &out) - total).abs() < 1e-12 * total);
            let sector_sum: f64 = state.sector_norms_sqr(&g).iter().sum();
            assert!((sector_sum - total).abs() < 1e-12 * total);
            for (pushed, born) in projected_densities(&g, &out).iter().zip(state.born_densities()) {
                for (a, b) in pushed.iter().zip(&born) {
                    assert!((a - b).abs() < 1e-12 * (1.0 + b));
                }
            }
            let sym = match kind {
                Statistics::Fermi => Symmetry::Anti,
                Statistics::Bose => Symmetry::Sym,
            };
            for (n, f) in out.iter().enumerate() {
                assert!(exchange_residual(g.sector(n).ordered(), f, sym).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn phases_change_no_density() {
        let lat = LatticeBox::open(&[3, 2]).unwrap();
        let g = build_gamma(&lat, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let state = random_state(&g, &mut rng);
        let unphased = SectorState::unphased(&g, state.sections.clone()).unwrap();
        let a = assemble_fock(&g, &state, Statistics::Fermi).unwrap();
        let b = assemble_fock(&g, &unphased, Statistics::Fermi).unwrap();
        for (fa, fb) in a.iter().zip(&b) {
            for (x, y) in fa.values.iter().zip(fb.values.iter()) {
                assert!((x.norm() - y.norm()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let lat = LatticeBox::open(&[3]).unwrap();
        let g = build_gamma(&lat, 2).unwrap();
        let bad = vec![Section::zeros(1, 1), Section::zeros(3, 1), Section::zeros(2, 1)];
        assert!(SectorState::unphased(&g, bad).is_err());
        assert!(SectorState::new(&g, vec![Section::zeros(1, 1)], vec![0.0]).is_err());
    }

    #[test]
    fn export_layout() {
        let lat = LatticeBox::open(&[2]).unwrap();
        let g = build_gamma(&lat, 1).unwrap();
        let out = assemble_fock(&g, &SectorState::vacuum(&g, C64::new(1.0, 0.0)), Statistics::Bose).unwrap();
        let json = serde_json::to_value(export_sectors(&out)).unwrap();
        assert_eq!(json[0]["sector"], 0);
        assert_eq!(json[1]["values"].as_array().unwrap().len(), 2);
    }
}
