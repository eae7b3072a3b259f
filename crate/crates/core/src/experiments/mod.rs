//! Reproducible experiment runners. Each returns a serializable report with a
//! list of named threshold checks; the command-line tool and the acceptance
//! suite both run these.

mod continuum;
mod lattice;
mod sectors;

use serde::Serialize;

pub use continuum::{bohm_ensemble, bohm_run, default_orbitals, BohmConfig, BohmRunReport, EnsembleRun, LatticePoint};
pub use lattice::{
    anyon_sweep, constructions_compare, d1_boundary, equivalence, frame_audit, holonomy_audit, AnyonSweepReport,
    ComparisonRecord, ConstructionsReport, D1BoundaryRun, EquivalenceConfig, EquivalenceReport, FrameAudit,
    HolonomyAudit, LoopRecord, SolverAudit,
};
pub use sectors::{fock_demo, FockDemoReport};

/// A measured quantity and the largest value it may take.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value ≤ limit`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, passed: value <= limit }
    }

    /// Passes when `value ≥ limit`.
    pub fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self { name: name.into(), value, limit, passed: value >= limit }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), value: if ok { 1.0 } else { 0.0 }, limit: 1.0, passed: ok }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// The failed checks, one line each.
pub fn failures(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {:.3e} (limit {:.3e})", c.name, c.value, c.limit))
        .collect()
}
