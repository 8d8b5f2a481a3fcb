//! Gauss–Legendre × trapezoid quadrature grid on the unit disk.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::par::Exec;
use crate::quadrature::{gauss_legendre, LegendreTransform, Rule};

/// Polar quadrature on `B₁`: `nr` Gauss–Legendre radii in `(0, 1)` (weight
/// `r dr`) times `ntheta` equispaced angles. Node `(i, j)` is stored at
/// index `i * ntheta + j`.
#[derive(Debug, Clone)]
pub struct PolarGrid {
    nr: usize,
    ntheta: usize,
    radii: Vec<f64>,
    /// `r_i` times the Gauss weight mapped to `[0, 1]`.
    ring_weights: Vec<f64>,
    rule: Rule,
    transform: LegendreTransform,
    exec: Exec,
}

impl PolarGrid {
    pub fn new(nr: usize, ntheta: usize) -> Result<Arc<Self>> {
        Self::with_exec(nr, ntheta, Exec::default())
    }

    pub fn with_exec(nr: usize, ntheta: usize, exec: Exec) -> Result<Arc<Self>> {
        if nr < 2 || ntheta < 3 {
            return Err(invalid(format!("polar grid {nr} x {ntheta} too small")));
        }
        let rule = gauss_legendre(nr);
        let radii: Vec<f64> = rule.nodes.iter().map(|&x| 0.5 * (1.0 + x)).collect();
        let ring_weights = radii
            .iter()
            .zip(&rule.weights)
            .map(|(&r, &w)| 0.5 * w * r)
            .collect();
        let transform = LegendreTransform::new(&rule);
        Ok(Arc::new(PolarGrid {
            nr,
            ntheta,
            radii,
            ring_weights,
            rule,
            transform,
            exec,
        }))
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn ntheta(&self) -> usize {
        self.ntheta
    }

    pub fn len(&self) -> usize {
        self.nr * self.ntheta
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn ring_weights(&self) -> &[f64] {
        &self.ring_weights
    }

    pub(crate) fn transform(&self) -> &LegendreTransform {
        &self.transform
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.ntheta as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        self.dtheta() * j as f64
    }

    /// Quadrature weight of node `(i, j)`; the weights sum to `π`.
    pub fn weight(&self, i: usize, _j: usize) -> f64 {
        self.ring_weights[i] * self.dtheta()
    }

    /// Mean area of one grid cell, `π / (nr · ntheta)`.
    pub fn cell_area(&self) -> f64 {
        PI / self.len() as f64
    }

    /// Largest ring weight `Σ_j w_ij`: the area error bound of node-indicator
    /// summation for a radial field.
    pub fn max_ring_area(&self) -> f64 {
        self.ring_weights.iter().fold(0.0f64, |m, &w| m.max(w)) * 2.0 * PI
    }

    /// `∫_{B₁} f(r, θ)` with rings summed in order.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        let dtheta = self.dtheta();
        self.exec.sum(self.nr, |i| {
            let r = self.radii[i];
            let ring: f64 = (0..self.ntheta).map(|j| f(r, dtheta * j as f64)).sum();
            ring * self.ring_weights[i] * dtheta
        })
    }

    fn integrate_values(&self, values: &[f64]) -> f64 {
        let dtheta = self.dtheta();
        self.exec.sum(self.nr, |i| {
            let ring: f64 = values[i * self.ntheta..(i + 1) * self.ntheta].iter().sum();
            ring * self.ring_weights[i] * dtheta
        })
    }
}

/// Real values at the nodes of a [`PolarGrid`].
#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: Arc<PolarGrid>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Arc<PolarGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("non-finite field value"));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn from_fn<F>(grid: &Arc<PolarGrid>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync + Send,
    {
        let nt = grid.ntheta();
        let rows = grid.exec().map(grid.nr(), |i| {
            let r = grid.radii()[i];
            (0..nt).map(|j| f(r, grid.theta(j))).collect::<Vec<_>>()
        });
        ScalarField {
            grid: Arc::clone(grid),
            values: rows.concat(),
        }
    }

    pub fn constant(grid: &Arc<PolarGrid>, c: f64) -> Self {
        ScalarField {
            grid: Arc::clone(grid),
            values: vec![c; grid.len()],
        }
    }

    pub fn grid(&self) -> &Arc<PolarGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.ntheta() + j]
    }

    /// Values along the ray `θ_j`, ordered by increasing radius.
    pub fn column(&self, j: usize) -> Vec<f64> {
        let nt = self.grid.ntheta();
        (0..self.grid.nr()).map(|i| self.values[i * nt + j]).collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        assert!(Arc::ptr_eq(&self.grid, &other.grid), "fields live on different grids");
        ScalarField {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn integrate(&self) -> f64 {
        self.grid.integrate_values(&self.values)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}
