//! Adaptive Dormand–Prince integration of the guiding equation `dq̂/dt = v(q̂, t)`.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::bohm::slater::SlaterState;
use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [&[f64]; 7] = [
    &[],
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const DEFAULT_SAMPLES: usize = 101;

/// Positions of labelled particles on a time grid.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub particles: usize,
    pub dim: usize,
    pub times: Vec<f64>,
    /// Particle-major `N·d` coordinates per output time.
    pub configs: Vec<Vec<f64>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Steps rejected because a stage came too close to a node.
    pub node_events: usize,
    /// Why integration stopped before the last output time, if it did.
    pub halted: Option<String>,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.halted.is_none()
    }

    pub fn last(&self) -> &[f64] {
        self.configs.last().expect("trajectory has an initial point")
    }

    /// Largest coordinate difference over common output times.
    pub fn max_deviation(&self, other: &Trajectory) -> f64 {
        self.configs
            .iter()
            .zip(&other.configs)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// `t,x1,…` with one row per output time; coordinates run particle-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for j in 0..self.particles {
            for a in 0..self.dim {
                let _ = write!(out, ",x{}", j * self.dim + a + 1);
            }
        }
        out.push('\n');
        for (t, q) in self.times.iter().zip(&self.configs) {
            let _ = write!(out, "{t:.17e}");
            for x in q {
                let _ = write!(out, ",{x:.17e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Integrates from `t = 0` to `t_end` with output on a uniform grid of 101 times.
pub fn integrate(state: &SlaterState, q0: &[f64], t_end: f64, tol: f64) -> Result<Trajectory> {
    let times: Vec<f64> = if t_end == 0.0 {
        vec![0.0]
    } else {
        (0..DEFAULT_SAMPLES).map(|i| t_end * i as f64 / (DEFAULT_SAMPLES - 1) as f64).collect()
    };
    integrate_grid(state, q0, &times, tol)
}

/// Integrates through the increasing output `times`; steps land exactly on each one.
///
/// The initial point must be off the nodes. A node met later ends the run
/// early: the trajectory keeps the outputs reached and records why in `halted`.
pub fn integrate_grid(state: &SlaterState, q0: &[f64], times: &[f64], tol: f64) -> Result<Trajectory> {
    if times.is_empty() || times.windows(2).any(|w| !(w[1] > w[0])) || !times.iter().all(|t| t.is_finite()) {
        return Err(Error::Domain("output times must be finite and strictly increasing".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let n = q0.len();
    let mut k = vec![vec![0.0; n]; 7];
    k[0] = state.velocity(q0, times[0])?;
    let mut tr = Trajectory {
        particles: state.particles(),
        dim: state.dim,
        times: vec![times[0]],
        configs: vec![q0.to_vec()],
        accepted_steps: 0,
        rejected_steps: 0,
        node_events: 0,
        halted: None,
    };
    let mut t = times[0];
    let mut y = q0.to_vec();
    let mut h = times.get(1).map_or(1.0, |t1| (t1 - t) * 0.1);
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    for &target in &times[1..] {
        while t < target {
            let remaining = target - t;
            let landing = h >= remaining;
            let step = if landing { remaining } else { h };
            if step <= 1e-13 * t.abs().max(1.0) {
                tr.halted = Some(format!("step size underflow at t = {t:.6e}"));
                return Ok(tr);
            }
            let mut node = None;
            for s in 1..7 {
                for i in 0..n {
                    stage[i] = y[i] + step * A[s].iter().zip(&k).map(|(a, ks)| a * ks[i]).sum::<f64>();
                }
                match state.velocity(&stage, t + C[s] * step) {
                    Ok(v) => k[s] = v,
                    Err(e @ Error::NodeGuard { .. }) => {
                        node = Some(e);
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if let Some(e) = node {
                tr.node_events += 1;
                tr.rejected_steps += 1;
                h = step * 0.25;
                if h <= 1e-13 * t.abs().max(1.0) {
                    tr.halted = Some(e.to_string());
                    return Ok(tr);
                }
                continue;
            }
            // the last stage is the fifth-order solution
            y_new.copy_from_slice(&stage);
            let mut err: f64 = 0.0;
            for i in 0..n {
                let e: f64 = step * E.iter().zip(&k).map(|(c, ks)| c * ks[i]).sum::<f64>();
                let scale = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
                err = err.max(e.abs() / scale);
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                t = if landing { target } else { t + step };
                y.copy_from_slice(&y_new);
                k.swap(0, 6);
                tr.accepted_steps += 1;
                // keep the proposal from the free step when only the landing clipped it
                h = if landing { h.max(step * factor) } else { step * factor };
            } else {
                tr.rejected_steps += 1;
                h = step * factor;
            }
        }
        tr.times.push(target);
        tr.configs.push(y.clone());
    }
    Ok(tr)
}

/// Trajectory of unlabelled configurations: particle positions sorted per time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnorderedTrajectory {
    pub times: Vec<f64>,
    pub configs: Vec<Vec<Vec<f64>>>,
}

impl UnorderedTrajectory {
    pub fn max_deviation(&self, other: &UnorderedTrajectory) -> f64 {
        self.configs
            .iter()
            .zip(&other.configs)
            .flat_map(|(a, b)| a.iter().zip(b))
            .flat_map(|(p, q)| p.iter().zip(q).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

pub fn project_trajectory(tr: &Trajectory) -> UnorderedTrajectory {
    let configs = tr
        .configs
        .iter()
        .map(|q| {
            let mut points: Vec<Vec<f64>> = q.chunks(tr.dim).map(<[f64]>::to_vec).collect();
            points.sort_by(|a, b| lexicographic(a, b));
            points
        })
        .collect();
    UnorderedTrajectory { times: tr.times.clone(), configs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bohm::orbital::{Evolution, Orbital};
    use crate::bohm::slater::{GaugeField, ScalarField};
    use crate::params::PhysicalParams;

    fn params() -> PhysicalParams {
        PhysicalParams::default()
    }

    fn two_fermions_1d() -> SlaterState {
        SlaterState::new(
            vec![
                Orbital::isotropic(vec![-1.0], vec![0.8], 0.7, Evolution::Free).unwrap(),
                Orbital::isotropic(vec![1.0], vec![-0.5], 0.9, Evolution::Free).unwrap(),
            ],
            params(),
        )
        .unwrap()
    }

    #[test]
    fn single_free_packet_follows_closed_form() {
        // x(t) = x₀ + p₀t/m + (x(0) − x₀)·√(1 + (ħt/2mσ²)²)
        let s = SlaterState::new(
            vec![Orbital::isotropic(vec![0.2], vec![0.7], 0.5, Evolution::Free).unwrap()],
            params(),
        )
        .unwrap();
        let tr = integrate(&s, &[0.9], 2.0, 1e-10).unwrap();
        for (t, q) in tr.times.iter().zip(&tr.configs) {
            let spread = (1.0 + (*t / (2.0 * 0.25)).powi(2)).sqrt();
            let exact = 0.2 + 0.7 * t + 0.7 * spread;
            assert!((q[0] - exact).abs() < 1e-8, "t = {t}");
        }
        assert!(tr.is_complete());
    }

    #[test]
    fn stationary_state_gives_constant_trajectory() {
        let omega: f64 = 1.3;
        let w = (1.0 / (2.0 * omega)).sqrt();
        let s = SlaterState::new(
            vec![Orbital::isotropic(vec![0.0, 0.0], vec![0.0, 0.0], w, Evolution::Harmonic { omega }).unwrap()],
            params(),
        )
        .unwrap();
        let tr = integrate(&s, &[0.4, -0.2], 5.0, 1e-9).unwrap();
        assert!(tr.configs.iter().all(|q| q == &[0.4, -0.2]));
    }

    #[test]
    fn permuted_start_gives_permuted_trajectory() {
        let s = two_fermions_1d();
        let a = integrate(&s, &[-0.8, 1.3], 1.0, 1e-9).unwrap();
        let b = integrate(&s, &[1.3, -0.8], 1.0, 1e-9).unwrap();
        assert!(a.is_complete() && b.is_complete());
        for (p, q) in a.configs.iter().zip(&b.configs) {
            assert!((p[0] - q[1]).abs() < 1e-6 && (p[1] - q[0]).abs() < 1e-6);
        }
        assert!(project_trajectory(&a).max_deviation(&project_trajectory(&b)) < 1e-6);
    }

    #[test]
    fn gauge_pair_gives_identical_trajectories() {
        let base = SlaterState::new(
            vec![Orbital::isotropic(vec![0.0, 0.5], vec![0.3, -0.6], 0.8, Evolution::Harmonic { omega: 0.7 }).unwrap()],
            params(),
        )
        .unwrap();
        let g = GaugeField {
            potential: ScalarField::Sine { amplitude: 1.5, k: vec![0.8, -1.1], phase: 0.2 },
            transform: ScalarField::Sum(vec![
                ScalarField::Linear { k: vec![2.0, 0.5] },
                ScalarField::Quadratic { curvature: -0.9, center: vec![1.0, 0.0] },
            ]),
        };
        let a = integrate(&base.clone().with_gauge(g.potential.clone()).unwrap(), &[0.3, 0.1], 1.0, 1e-9).unwrap();
        let b = integrate(&base.with_gauge(g.transformed()).unwrap(), &[0.3, 0.1], 1.0, 1e-9).unwrap();
        assert!(a.max_deviation(&b) < 1e-6);
    }

    #[test]
    fn node_start_is_an_error() {
        let s = two_fermions_1d();
        assert!(matches!(integrate(&s, &[0.3, 0.3], 1.0, 1e-9), Err(Error::NodeGuard { .. })));
    }

    #[test]
    fn single_particle_projection_is_identity() {
        let s = SlaterState::new(
            vec![Orbital::isotropic(vec![0.0, 0.0], vec![1.0, 0.0], 1.0, Evolution::Free).unwrap()],
            params(),
        )
        .unwrap();
        let tr = integrate(&s, &[0.1, 0.2], 0.5, 1e-9).unwrap();
        let p = project_trajectory(&tr);
        for (q, u) in tr.configs.iter().zip(&p.configs) {
            assert_eq!(&u[0], q);
        }
    }

    #[test]
    fn projection_sorts_ties_deterministically() {
        let tr = Trajectory {
            particles: 3,
            dim: 2,
            times: vec![0.0],
            configs: vec![vec![1.0, 2.0, 1.0, -1.0, 0.0, 5.0]],
            accepted_steps: 0,
            rejected_steps: 0,
            node_events: 0,
            halted: None,
        };
        let p = project_trajectory(&tr);
        assert_eq!(p.configs[0], vec![vec![0.0, 5.0], vec![1.0, -1.0], vec![1.0, 2.0]]);
        assert_eq!(project_trajectory(&tr), p);
    }

    #[test]
    fn csv_layout() {
        let s = two_fermions_1d();
        let tr = integrate(&s, &[-0.8, 1.3], 0.1, 1e-9).unwrap();
        let csv = tr.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,x1,x2"));
        assert_eq!(lines.count(), 101);
    }
}
