//! The Alexandrov inequality `L² ≥ (2α - (λ/2)M)·M` with `λ = 2K₀` and
//! `α = 2π - ∫_{K>K₀} (K - K₀) e^u`.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::check::{num, CheckReport};
use crate::error::{invalid, Result};
use crate::geometry::QUADRATURE_TOL;
use crate::grid::{PolarGrid, ScalarField};
use crate::level_sets::{
    boundary_length_of, diff_ineq_check_with, distribution, BoundaryData, H_of_a, FINITE_DIFFERENCE_TOL,
};
use crate::radial::RadialFamily;

/// Pointwise curvature excess below this is rounding noise of a
/// constant-curvature field and counts as zero.
pub const K_EXCESS_FLOOR: f64 = 1e-10;

/// Budgets `α` at or below this are quadrature noise around zero.
const ALPHA_FLOOR: f64 = 1e-10;

/// `K = -½ e^{-u} Δu` of a radial family on the grid nodes.
pub fn curvature_from_u(profile: &RadialFamily, grid: &Arc<PolarGrid>) -> ScalarField {
    ScalarField::from_fn(grid, |r, _| profile.curvature(r))
}

/// A radial metric on `B₁` with its curvature threshold.
#[derive(Debug, Clone)]
pub struct CurvatureScenario {
    pub family: RadialFamily,
    pub u: ScalarField,
    pub k: ScalarField,
    pub k0: f64,
    pub lambda: f64,
    pub mu2_mass: f64,
    pub alpha: f64,
}

impl CurvatureScenario {
    pub fn new(family: RadialFamily, grid: &Arc<PolarGrid>, k0: f64) -> Result<Self> {
        if !(k0 >= 0.0 && k0.is_finite()) {
            return Err(invalid(format!("curvature threshold K₀ must be non-negative, got {k0}")));
        }
        if !(family.r_max() > 1.0) {
            return Err(invalid(format!(
                "{} metric is not defined on the closed unit disk",
                family.name()
            )));
        }
        let u = ScalarField::from_fn(grid, |r, _| family.value(r));
        let k = curvature_from_u(&family, grid);
        let excess = k.zip_with(&u, |kv, uv| {
            let d = kv - k0;
            if d > K_EXCESS_FLOOR {
                d * uv.exp()
            } else {
                0.0
            }
        });
        let mu2_mass = excess.integrate();
        Ok(CurvatureScenario {
            family,
            u,
            k,
            k0,
            lambda: 2.0 * k0,
            mu2_mass,
            alpha: TAU - mu2_mass,
        })
    }

    pub fn boundary(&self) -> BoundaryData {
        BoundaryData::Constant(self.family.value(1.0))
    }
}

/// `lhs = L²`, `rhs = (2α - (λ/2)M)·M`, `slack = lhs - rhs`. The metadata
/// carries the sampled differential inequality `-dμ/da ≤ H/(2αa)` when the
/// metric is not flat.
pub fn alexandrov_check(sc: &CurvatureScenario) -> Result<CheckReport> {
    alexandrov_check_with(sc, 64, QUADRATURE_TOL)
}

pub fn alexandrov_check_with(sc: &CurvatureScenario, nlevels: usize, tol: f64) -> Result<CheckReport> {
    if !(sc.alpha > ALPHA_FLOOR) {
        return Err(invalid(format!(
            "excess curvature mass {} leaves no budget (α = {})",
            sc.mu2_mass, sc.alpha
        )));
    }
    let mass = sc.u.map(f64::exp).integrate();
    let length = boundary_length_of(&sc.boundary());
    let lhs = length * length;
    let rhs = (2.0 * sc.alpha - (sc.lambda / 2.0) * mass) * mass;
    let mut report = CheckReport::new("alexandrov", lhs, rhs, lhs - rhs, tol)
        .with("alpha", num(sc.alpha))
        .with("boundary_length", num(length))
        .with("k0", num(sc.k0))
        .with("lambda", num(sc.lambda))
        .with("mass", num(mass))
        .with("mu2_mass", num(sc.mu2_mass))
        .with("nr", sc.u.grid().nr())
        .with("ntheta", sc.u.grid().ntheta());
    match level_inequality(sc, nlevels) {
        Ok(diff) => {
            report.insert("level_ineq_pass", diff.pass);
            report.insert("level_ineq_residual", num(diff.lhs));
        }
        Err(e) => report.insert("level_ineq_skipped", e.to_string()),
    }
    Ok(report)
}

fn level_inequality(sc: &CurvatureScenario, nlevels: usize) -> Result<CheckReport> {
    let h = sc.family.value(1.0);
    let v = sc.u.map(|x| x - h);
    let weight = ScalarField::constant(sc.u.grid(), h.exp());
    let profile = distribution(&v, &weight, nlevels)?;
    let hs = H_of_a(&sc.u, &v, sc.lambda, &profile)?;
    Ok(diff_ineq_check_with(&profile, &hs, 2.0 * sc.alpha, FINITE_DIFFERENCE_TOL))
}
