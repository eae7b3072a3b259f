//! Quantum mechanics of identical particles on lattice configuration spaces:
//! flat Hermitian bundles over the unordered configuration graph, their
//! equivalence with antisymmetric wave functions on the ordered graph, and
//! Bohmian trajectories for Slater determinants.

pub mod bohm;
pub mod bundle;
pub mod confspace;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod graph;
pub mod iso;
pub mod linalg;
pub mod params;
pub mod perm;
pub mod potential;
pub mod triple;

pub use error::{Error, Result};
pub use params::PhysicalParams;
