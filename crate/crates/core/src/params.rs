use serde::{Deserialize, Serialize};

use crate::confspace::LatticeBox;
use crate::error::{Error, Result};

/// `ħ`, particle mass and lattice spacing, in whatever units the caller uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    pub spacing: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0, spacing: 1.0 }
    }
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, spacing: f64) -> Result<Self> {
        let p = Self { hbar, mass, spacing };
        p.validate()?;
        Ok(p)
    }

    /// Unit `ħ` and mass, spacing taken from the box.
    pub fn for_lattice(lattice: &LatticeBox) -> Self {
        Self { spacing: lattice.spacing(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("mass", self.mass), ("spacing", self.spacing)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Errors unless the spacing agrees with the lattice it is used on.
    pub fn check_lattice(&self, lattice: &LatticeBox) -> Result<()> {
        self.validate()?;
        if (self.spacing - lattice.spacing()).abs() > 1e-15 * lattice.spacing() {
            return Err(Error::InvalidParams(format!(
                "spacing {} differs from lattice spacing {}",
                self.spacing,
                lattice.spacing()
            )));
        }
        Ok(())
    }

    /// Hopping amplitude `ħ² / (2 m a²)`.
    pub fn hopping(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass * self.spacing * self.spacing)
    }
}
