//! Bohmian trajectories for anti-symmetric Gaussian wave packets in continuous space.

mod ensemble;
mod integrate;
mod orbital;
mod slater;

pub use ensemble::{
    equivariance_test, lattice_velocity_error, marginal_cdf, sample_configuration, EnsembleReport, MarginalCdf,
};
pub use integrate::{integrate, integrate_grid, project_trajectory, Trajectory, UnorderedTrajectory};
pub use orbital::{gaussian_integral, Evolution, Orbital, Quadratic};
pub use slater::{GaugeField, ScalarField, SlaterState, NODE_GUARD};
