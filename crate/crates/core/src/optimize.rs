//! Deterministic search over the Bloch sphere: a full (theta, phi) grid
//! followed by compass pattern search with step halving.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::qstate::BlochProjector;

const MAX_REFINEMENT_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereSearch {
    /// Grid points on `[0, pi]`, both poles included.
    pub theta_points: usize,
    /// Grid points on `[0, 2pi)`.
    pub phi_points: usize,
    /// Refinement stops once both steps fall below this (radians).
    pub min_step: f64,
}

impl Default for SphereSearch {
    fn default() -> Self {
        Self { theta_points: 64, phi_points: 128, min_step: 1e-5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereOptimum {
    pub point: BlochProjector,
    pub value: f64,
    /// Best value seen on the grid, before refinement.
    pub grid_value: f64,
}

impl SphereSearch {
    pub fn grid(&self) -> Vec<(f64, f64)> {
        let nt = self.theta_points.max(2);
        let np = self.phi_points.max(1);
        (0..nt)
            .flat_map(|i| {
                let theta = PI * i as f64 / (nt - 1) as f64;
                (0..np).map(move |j| (theta, TAU * j as f64 / np as f64))
            })
            .collect()
    }

    /// Maximises `f(theta, phi)`. Grid ties resolve to the smallest theta,
    /// then the smallest phi; refinement only accepts strict improvements.
    pub fn maximize<F>(&self, f: F) -> SphereOptimum
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let grid = self.grid();
        // Parallel evaluation, sequential reduction in grid order.
        let values: Vec<f64> = grid.par_iter().map(|&(t, p)| f(t, p)).collect();
        let mut best = 0;
        for (i, v) in values.iter().enumerate() {
            if *v > values[best] {
                best = i;
            }
        }
        let grid_value = values[best];
        let (mut theta, mut phi) = grid[best];
        let mut value = grid_value;

        let mut d_theta = PI / (self.theta_points.max(2) - 1) as f64;
        let mut d_phi = TAU / self.phi_points.max(1) as f64;
        let mut iterations = 0;
        while (d_theta >= self.min_step || d_phi >= self.min_step) && iterations < MAX_REFINEMENT_ITERATIONS {
            iterations += 1;
            let mut improved = None;
            for (dt, dp) in [(d_theta, 0.0), (-d_theta, 0.0), (0.0, d_phi), (0.0, -d_phi)] {
                let cand = BlochProjector::from_sphere(theta + dt, phi + dp);
                let v = f(cand.theta(), cand.phi());
                if v > improved.map_or(value, |(_, best_v)| best_v) {
                    improved = Some((cand, v));
                }
            }
            match improved {
                Some((cand, v)) => {
                    theta = cand.theta();
                    phi = cand.phi();
                    value = v;
                }
                None => {
                    d_theta *= 0.5;
                    d_phi *= 0.5;
                }
            }
        }
        SphereOptimum { point: BlochProjector::from_sphere(theta, phi), value, grid_value }
    }

    pub fn minimize<F>(&self, f: F) -> SphereOptimum
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let opt = self.maximize(|t, p| -f(t, p));
        SphereOptimum { value: -opt.value, grid_value: -opt.grid_value, ..opt }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bloch_vector(t: f64, p: f64) -> [f64; 3] {
        [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]
    }

    #[test]
    fn finds_off_grid_maximum_of_smooth_function() {
        let target = bloch_vector(1.234, 4.321);
        let search = SphereSearch::default();
        let opt = search.maximize(|t, p| {
            let v = bloch_vector(t, p);
            v.iter().zip(target).map(|(a, b)| a * b).sum()
        });
        assert!((opt.value - 1.0).abs() < 1e-9);
        assert!((opt.point.theta() - 1.234).abs() < 1e-4);
        assert!((opt.point.phi() - 4.321).abs() < 1e-4);
        assert!(opt.value >= opt.grid_value);
    }

    #[test]
    fn flat_objective_returns_canonical_point() {
        let opt = SphereSearch::default().maximize(|_, _| 0.0);
        assert_eq!((opt.point.theta(), opt.point.phi(), opt.value), (0.0, 0.0, 0.0));
    }

    #[test]
    fn minimize_negates() {
        let opt = SphereSearch::default().minimize(|t, _| (t - 2.0).powi(2));
        assert!(opt.value < 1e-10);
        assert!((opt.point.theta() - 2.0).abs() < 1e-5);
    }

    #[test]
    fn grid_shape() {
        let g = SphereSearch { theta_points: 3, phi_points: 4, min_step: 1.0 }.grid();
        assert_eq!(g.len(), 12);
        assert_eq!(g[0], (0.0, 0.0));
        assert_eq!(g[11].0, PI);
    }
}
