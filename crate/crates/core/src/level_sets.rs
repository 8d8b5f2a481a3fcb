//! Superlevel-set distribution functions and the Bol inequality.
//!
//! For a field `v` and a positive density `w` on the disk, the distribution
//! function is `a(μ) = ∫_{v > μ} w`. Masses are computed ray by ray: along
//! each grid ray the field and the density are expanded in Legendre series
//! through the Gauss nodes, the crossings `v = μ` are located on the series,
//! and the density is integrated exactly between crossings through its
//! primitive. The plain node-indicator sum is kept as a cross-check.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::check::{num, nums, CheckReport};
use crate::error::{invalid, Error, Result};
use crate::fd::centered_derivative;
use crate::fourier::FourierCoeffs;
use crate::geometry::{boundary_length, QUADRATURE_TOL};
use crate::quadrature::{legendre_antiderivative, legendre_eval};
use crate::radial::RadialFamily;

pub use crate::grid::{PolarGrid, ScalarField};

/// Default tolerance for checks built on finite differences of a profile.
pub const FINITE_DIFFERENCE_TOL: f64 = 1e-3;

/// Fraction of the total mass trimmed at each end of a profile before
/// differentiating it.
const EDGE_FRACTION: f64 = 0.05;

/// How superlevel masses are integrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LevelQuadrature {
    /// Crossings located on per-ray Legendre interpolants.
    #[default]
    RayCrossing,
    /// `Σ_{v(node) > μ} w · weight`; error up to one ring for radial fields.
    NodeIndicator,
}

/// Sampled distribution function of one density.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionProfile {
    /// Strictly increasing levels `μ_k`.
    pub levels: Vec<f64>,
    /// `a(μ_k)`, non-increasing.
    pub masses: Vec<f64>,
    /// Grid integral of the density.
    pub total: f64,
    /// Which density was integrated.
    pub weight_tag: String,
}

impl DistributionProfile {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level_spacing(&self) -> f64 {
        (self.levels[self.len() - 1] - self.levels[0]) / (self.len() - 1) as f64
    }

    /// Sample indices away from both ends of the mass range.
    pub fn interior(&self) -> Vec<usize> {
        let lo = EDGE_FRACTION * self.total;
        let hi = (1.0 - EDGE_FRACTION) * self.total;
        (2..self.len().saturating_sub(2))
            .filter(|&k| self.masses[k] >= lo && self.masses[k] <= hi)
            .collect()
    }
}

/// The Liouville bubble `u = log(4β²/(1+β²r²)²)` on `grid`: returns `u`,
/// `v = u - h` and the constant harmonic part `h = u(1)`.
pub fn build_bubble_field(beta: f64, grid: &Arc<PolarGrid>) -> Result<(ScalarField, ScalarField, f64)> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("bubble parameter must be positive, got {beta}")));
    }
    let family = RadialFamily::Bubble { beta };
    let h = family.value(1.0);
    let u = ScalarField::from_fn(grid, |r, _| family.value(r));
    let v = ScalarField::from_fn(grid, |r, _| 2.0 * ((1.0 + beta * beta) / (1.0 + beta * beta * r * r)).ln());
    Ok((u, v, h))
}

/// Legendre data for one ray `θ_j`, in the variable `x = 2r - 1`.
struct Ray {
    field: Vec<f64>,
    /// Extended samples: `x = -1`, the Gauss nodes, `x = 1`.
    xs: Vec<f64>,
    samples: Vec<f64>,
    /// Primitive of `r · density(r)` in `x`.
    primitive: Vec<f64>,
}

impl Ray {
    fn new(grid: &PolarGrid, v: &ScalarField, density: &ScalarField, j: usize) -> Ray {
        let tr = grid.transform();
        let column = v.column(j);
        let field = tr.coefficients(&column);
        let q: Vec<f64> = density
            .column(j)
            .iter()
            .zip(grid.radii())
            .map(|(&w, &r)| w * r)
            .collect();
        let primitive = legendre_antiderivative(&tr.coefficients(&q));
        let mut xs = Vec::with_capacity(column.len() + 2);
        xs.push(-1.0);
        xs.extend_from_slice(&grid.rule().nodes);
        xs.push(1.0);
        let mut samples = Vec::with_capacity(column.len() + 2);
        samples.push(legendre_eval(&field, -1.0));
        samples.extend_from_slice(&column);
        samples.push(legendre_eval(&field, 1.0));
        Ray { field, xs, samples, primitive }
    }

    fn mass_between(&self, x0: f64, x1: f64) -> f64 {
        // dr = dx / 2
        0.5 * (legendre_eval(&self.primitive, x1) - legendre_eval(&self.primitive, x0))
    }

    /// Root of `field(x) = level` in `[a, b]` where the sign changes.
    fn crossing(&self, a: f64, b: f64, level: f64) -> f64 {
        let f = |x: f64| legendre_eval(&self.field, x) - level;
        let (mut a, mut b) = (a, b);
        let (mut fa, mut fb) = (f(a), f(b));
        if fa == 0.0 {
            return a;
        }
        if fb == 0.0 || fa.signum() == fb.signum() {
            // The series and the stored samples disagree by rounding only.
            return if fa.abs() < fb.abs() { a } else { b };
        }
        // Illinois variant of regula falsi, bisecting when it stalls.
        let mut side = 0i8;
        for _ in 0..200 {
            let width = b - a;
            if width.abs() <= 4.0 * f64::EPSILON {
                break;
            }
            let mut c = (a * fb - b * fa) / (fb - fa);
            if !(c > a.min(b) && c < a.max(b)) {
                c = 0.5 * (a + b);
            }
            let fc = f(c);
            if fc == 0.0 {
                return c;
            }
            if fc.signum() == fb.signum() {
                b = c;
                fb = fc;
                if side == -1 {
                    fa *= 0.5;
                }
                side = -1;
            } else {
                a = c;
                fa = fc;
                if side == 1 {
                    fb *= 0.5;
                }
                side = 1;
            }
        }
        0.5 * (a + b)
    }

    /// `∫ r · density dr` over `{field > level}` along the ray.
    fn mass_above(&self, level: f64) -> f64 {
        let mut mass = 0.0;
        let mut inside = self.samples[0] > level;
        let mut enter = -1.0;
        for k in 1..self.xs.len() {
            let now = self.samples[k] > level;
            if now != inside {
                let x = self.crossing(self.xs[k - 1], self.xs[k], level);
                if inside {
                    mass += self.mass_between(enter, x);
                } else {
                    enter = x;
                }
                inside = now;
            }
        }
        if inside {
            mass += self.mass_between(enter, 1.0);
        }
        mass
    }

    fn extent(&self) -> (f64, f64) {
        self.samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| (lo.min(s), hi.max(s)))
    }
}

fn check_density(density: &ScalarField) -> Result<()> {
    if density.values().iter().any(|&w| !(w > 0.0)) {
        return Err(invalid("density must be positive at every node"));
    }
    Ok(())
}

/// `a(μ)` at each level, integrated with `method`.
pub fn superlevel_masses(
    v: &ScalarField,
    density: &ScalarField,
    levels: &[f64],
    method: LevelQuadrature,
) -> Result<Vec<f64>> {
    check_density(density)?;
    let grid = Arc::clone(v.grid());
    if !Arc::ptr_eq(&grid, density.grid()) {
        return Err(invalid("field and density live on different grids"));
    }
    let dtheta = grid.dtheta();
    let columns: Vec<Vec<f64>> = match method {
        LevelQuadrature::RayCrossing => grid.exec().map(grid.ntheta(), |j| {
            let ray = Ray::new(&grid, v, density, j);
            levels.iter().map(|&mu| ray.mass_above(mu)).collect()
        }),
        LevelQuadrature::NodeIndicator => grid.exec().map(grid.ntheta(), |j| {
            let vc = v.column(j);
            let wc = density.column(j);
            levels
                .iter()
                .map(|&mu| {
                    (0..grid.nr())
                        .filter(|&i| vc[i] > mu)
                        .map(|i| grid.ring_weights()[i] * wc[i])
                        .sum()
                })
                .collect()
        }),
    };
    Ok((0..levels.len())
        .map(|k| columns.iter().map(|c| c[k]).sum::<f64>() * dtheta)
        .collect())
}

/// Range of `v` over the nodes and both ends of every ray.
pub fn field_extent(v: &ScalarField) -> (f64, f64) {
    let grid = v.grid();
    let ones = ScalarField::constant(grid, 1.0);
    grid.exec()
        .map(grid.ntheta(), |j| Ray::new(grid, v, &ones, j).extent())
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)))
}

/// Distribution function of `density` over superlevel sets of `v` at
/// `nlevels` equispaced levels spanning the range of `v`.
pub fn distribution(v: &ScalarField, density: &ScalarField, nlevels: usize) -> Result<DistributionProfile> {
    distribution_with(v, density, nlevels, LevelQuadrature::RayCrossing)
}

pub fn distribution_with(
    v: &ScalarField,
    density: &ScalarField,
    nlevels: usize,
    method: LevelQuadrature,
) -> Result<DistributionProfile> {
    if nlevels < 8 {
        return Err(invalid(format!("need at least 8 levels, got {nlevels}")));
    }
    check_density(density)?;
    let (lo, hi) = field_extent(v);
    if hi - lo <= 1e-12 * (1.0 + hi.abs().max(lo.abs())) {
        return Err(Error::DegenerateField(format!(
            "field is constant ({lo}); its distribution function is a step"
        )));
    }
    let levels: Vec<f64> = (0..nlevels)
        .map(|k| lo + (hi - lo) * k as f64 / (nlevels - 1) as f64)
        .collect();
    let mut masses = superlevel_masses(v, density, &levels, method)?;
    // Nested superlevel sets: clamp rounding-level increases.
    for k in 1..masses.len() {
        masses[k] = masses[k].min(masses[k - 1]).max(0.0);
    }
    let tag = match method {
        LevelQuadrature::RayCrossing => "ray_crossing",
        LevelQuadrature::NodeIndicator => "node_indicator",
    };
    Ok(DistributionProfile {
        levels,
        masses,
        total: density.integrate(),
        weight_tag: tag.to_string(),
    })
}

/// Piecewise-linear inverse `μ(a)` of a distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneInverse {
    /// Increasing masses.
    a: Vec<f64>,
    mu: Vec<f64>,
}

impl MonotoneInverse {
    pub fn eval(&self, a: f64) -> Result<f64> {
        let n = self.a.len();
        let span = self.a[n - 1] - self.a[0];
        let slack = 1e-12 * span.max(1.0);
        if !(a >= self.a[0] - slack && a <= self.a[n - 1] + slack) {
            return Err(invalid(format!(
                "mass {a} outside the sampled range [{}, {}]",
                self.a[0],
                self.a[n - 1]
            )));
        }
        let a = a.clamp(self.a[0], self.a[n - 1]);
        let k = self.a.partition_point(|&x| x < a).clamp(1, n - 1);
        let (a0, a1) = (self.a[k - 1], self.a[k]);
        let t = (a - a0) / (a1 - a0);
        Ok(self.mu[k - 1] + t * (self.mu[k] - self.mu[k - 1]))
    }

    pub fn masses(&self) -> &[f64] {
        &self.a
    }

    pub fn levels(&self) -> &[f64] {
        &self.mu
    }
}

/// Inverts a profile after merging plateaus (keeping the lowest level of
/// each plateau).
pub fn mu_of_a(profile: &DistributionProfile) -> Result<MonotoneInverse> {
    let mut a = Vec::new();
    let mut mu = Vec::new();
    for (k, (&m, &l)) in profile.masses.iter().zip(&profile.levels).enumerate() {
        if k > 0 {
            let prev = profile.masses[k - 1];
            if m > prev {
                return Err(Error::Inconsistency(format!(
                    "distribution increases between levels {} and {l}",
                    profile.levels[k - 1]
                )));
            }
            if m == prev {
                continue;
            }
        }
        a.push(m);
        mu.push(l);
    }
    if a.len() < 2 {
        return Err(Error::Inconsistency("distribution has fewer than two distinct masses".into()));
    }
    a.reverse();
    mu.reverse();
    Ok(MonotoneInverse { a, mu })
}

/// `H(a) = λ ∫_{v > μ(a)} e^u` sampled on the levels of a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledH {
    pub lambda: f64,
    /// Masses `a_k` of the profile (non-increasing).
    pub a: Vec<f64>,
    pub levels: Vec<f64>,
    pub h: Vec<f64>,
}

impl SampledH {
    /// Centered finite-difference `dH/da` at sample `k`.
    pub fn derivative(&self, k: usize) -> Option<f64> {
        centered_derivative(&self.a, &self.h, k)
    }
}

#[allow(non_snake_case)]
pub fn H_of_a(u_field: &ScalarField, v: &ScalarField, lambda: f64, profile: &DistributionProfile) -> Result<SampledH> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("λ must be non-negative, got {lambda}")));
    }
    let density = u_field.map(f64::exp);
    let method = if profile.weight_tag == "node_indicator" {
        LevelQuadrature::NodeIndicator
    } else {
        LevelQuadrature::RayCrossing
    };
    let masses = superlevel_masses(v, &density, &profile.levels, method)?;
    Ok(SampledH {
        lambda,
        a: profile.masses.clone(),
        levels: profile.levels.clone(),
        h: masses.iter().map(|&m| lambda * m).collect(),
    })
}

/// `-dμ/da ≤ H/(4πa)` at interior samples.
pub fn diff_ineq_check(profile: &DistributionProfile, h: &SampledH) -> CheckReport {
    diff_ineq_check_with(profile, h, 4.0 * PI, FINITE_DIFFERENCE_TOL)
}

/// `-dμ/da ≤ H/(c·a)` with isoperimetric constant `c` (`4π` for Bol, `2α`
/// under an excess-curvature budget). `lhs` is the largest residual
/// `-dμ/da - H/(c·a)`; the check passes when it is at most `tol`.
pub fn diff_ineq_check_with(profile: &DistributionProfile, h: &SampledH, iso: f64, tol: f64) -> CheckReport {
    let interior = profile.interior();
    let residuals: Vec<f64> = interior
        .iter()
        .filter_map(|&k| {
            let dmu = centered_derivative(&profile.masses, &profile.levels, k)?;
            Some(-dmu - h.h[k] / (iso * profile.masses[k]))
        })
        .collect();
    let worst = residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let worst = if residuals.is_empty() { f64::NAN } else { worst };
    let mut report = CheckReport::new("diff_ineq", worst, 0.0, -worst, tol)
        .with("iso_constant", num(iso))
        .with("lambda", num(h.lambda))
        .with("samples", residuals.len())
        .with("slack_samples", nums(&residuals.iter().map(|r| -r).collect::<Vec<_>>()));
    if residuals.is_empty() {
        report.pass = false;
    }
    report
}

/// `P(a) = aH' - H + H²/(2c)` on the interior samples, ordered by
/// increasing `a`, with its monotonicity report.
#[derive(Debug, Clone, PartialEq)]
pub struct PProfile {
    pub a: Vec<f64>,
    pub p: Vec<f64>,
    pub h_prime: Vec<f64>,
    pub report: CheckReport,
}

#[allow(non_snake_case)]
pub fn P_profile(profile: &DistributionProfile, h: &SampledH) -> PProfile {
    P_profile_with(profile, h, 4.0 * PI)
}

#[allow(non_snake_case)]
pub fn P_profile_with(profile: &DistributionProfile, h: &SampledH, iso: f64) -> PProfile {
    let mut rows: Vec<(f64, f64, f64)> = profile
        .interior()
        .into_iter()
        .filter_map(|k| {
            let dh = h.derivative(k)?;
            let a = profile.masses[k];
            let hk = h.h[k];
            Some((a, a * dh - hk + hk * hk / (2.0 * iso), dh))
        })
        .collect();
    rows.sort_by(|x, y| x.0.total_cmp(&y.0));
    let a: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let p: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let h_prime: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let max_abs = p.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let worst_drop = p.windows(2).map(|w| w[0] - w[1]).fold(0.0f64, f64::max);
    let tol = FINITE_DIFFERENCE_TOL * max_abs.max(1.0);
    let mut report = CheckReport::new("p_monotone", worst_drop, 0.0, -worst_drop, tol)
        .with("iso_constant", num(iso))
        .with("max_abs_p", num(max_abs))
        .with("samples", p.len());
    if p.len() < 2 {
        report.pass = false;
    }
    PProfile { a, p, h_prime, report }
}

/// Boundary values of a conformal factor.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryData {
    Fourier(FourierCoeffs),
    Constant(f64),
}

/// `∫_{∂B₁} e^{u/2} dσ`.
pub fn boundary_length_of(data: &BoundaryData) -> f64 {
    match data {
        BoundaryData::Fourier(c) => boundary_length(c),
        BoundaryData::Constant(c) => TAU * (0.5 * c).exp(),
    }
}

/// Bol: `lhs = L² ≥ rhs = (4π - (λ/2)M)·M`, `M = ∫ e^u`; `slack = lhs - rhs`.
pub fn bol_check(u_field: &ScalarField, u_boundary: &BoundaryData, lambda: f64) -> Result<CheckReport> {
    bol_check_with(u_field, u_boundary, lambda, QUADRATURE_TOL)
}

pub fn bol_check_with(u_field: &ScalarField, u_boundary: &BoundaryData, lambda: f64, tol: f64) -> Result<CheckReport> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("λ must be non-negative, got {lambda}")));
    }
    let mass = u_field.map(f64::exp).integrate();
    let length = boundary_length_of(u_boundary);
    let lhs = length * length;
    let rhs = (4.0 * PI - (lambda / 2.0) * mass) * mass;
    Ok(CheckReport::new("bol", lhs, rhs, lhs - rhs, tol)
        .with("boundary_length", num(length))
        .with("lambda", num(lambda))
        .with("mass", num(mass))
        .with("nr", u_field.grid().nr())
        .with("ntheta", u_field.grid().ntheta()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> Arc<PolarGrid> {
        PolarGrid::new(64, 128).unwrap()
    }

    #[test]
    fn bubble_field_values() {
        let g = grid();
        let (u, v, h) = build_bubble_field(1.0, &g).unwrap();
        assert_eq!(h, 0.0);
        let (lo, hi) = field_extent(&v);
        assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 2.0 * 2f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(u.at(3, 5), v.at(3, 5), epsilon = 1e-15);
        let (_, _, h2) = build_bubble_field(2.0, &g).unwrap();
        assert_abs_diff_eq!(h2, (16.0f64 / 25.0).ln(), epsilon = 1e-14);
        // v decreases along rays
        let col = v.column(7);
        assert!(col.windows(2).all(|w| w[1] < w[0]));
        assert!(build_bubble_field(0.0, &g).is_err());
    }

    #[test]
    fn bubble_distribution_closed_form() {
        let g = grid();
        let (_, v, h) = build_bubble_field(1.0, &g).unwrap();
        let w = ScalarField::constant(&g, h.exp());
        let levels = [0.0, 2.0 * (4.0f64 / 3.0).ln(), 0.3, 1.0];
        let a = superlevel_masses(&v, &w, &levels, LevelQuadrature::RayCrossing).unwrap();
        for (&mu, &got) in levels.iter().zip(&a) {
            assert_abs_diff_eq!(got, PI * (2.0 * (-mu / 2.0).exp() - 1.0), epsilon = 1e-10);
        }
        assert_abs_diff_eq!(a[1], PI / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn paraboloid_distribution() {
        let g = grid();
        let v = ScalarField::from_fn(&g, |r, _| 1.0 - r * r);
        let w = ScalarField::constant(&g, 1.0);
        let p = distribution(&v, &w, 16).unwrap();
        for (&mu, &a) in p.levels.iter().zip(&p.masses) {
            assert_abs_diff_eq!(a, PI * (1.0 - mu), epsilon = 1e-10);
        }
    }

    #[test]
    fn node_indicator_agrees_within_one_ring() {
        let g = grid();
        let (_, v, _) = build_bubble_field(1.0, &g).unwrap();
        let w = ScalarField::constant(&g, 1.0);
        let exact = distribution(&v, &w, 32).unwrap();
        let coarse = distribution_with(&v, &w, 32, LevelQuadrature::NodeIndicator).unwrap();
        for (a, b) in exact.masses.iter().zip(&coarse.masses) {
            assert!((a - b).abs() <= g.max_ring_area());
        }
    }

    #[test]
    fn off_center_field_matches_exact_disk_areas() {
        // v = -|x - c|²: superlevel sets are disks around c inside B₁.
        let g = grid();
        let c = 0.3;
        let v = ScalarField::from_fn(&g, |r, t| -((r * t.cos() - c).powi(2) + (r * t.sin()).powi(2)));
        let w = ScalarField::constant(&g, 1.0);
        // Disks around the origin: one crossing per ray, spectral in θ.
        let levels = [-0.4, -0.25, -0.16];
        let a = superlevel_masses(&v, &w, &levels, LevelQuadrature::RayCrossing).unwrap();
        for (&mu, &got) in levels.iter().zip(&a) {
            assert_abs_diff_eq!(got, PI * -mu, epsilon = 1e-9);
        }
        // A disk missing the origin: tangent rays limit the angular rule.
        let a = superlevel_masses(&v, &w, &[-0.01], LevelQuadrature::RayCrossing).unwrap();
        assert_abs_diff_eq!(a[0], PI * 0.01, epsilon = 2.0 * g.cell_area());
    }

    #[test]
    fn constant_field_is_degenerate() {
        let g = grid();
        let v = ScalarField::constant(&g, 0.2);
        let w = ScalarField::constant(&g, 1.0);
        assert!(matches!(distribution(&v, &w, 16), Err(Error::DegenerateField(_))));
        let v = ScalarField::from_fn(&g, |r, _| r);
        assert!(distribution(&v, &w, 4).is_err());
        let bad = ScalarField::constant(&g, 0.0);
        assert!(distribution(&v, &bad, 16).is_err());
    }

    #[test]
    fn inverse_of_bubble_profile() {
        let g = grid();
        let (_, v, _) = build_bubble_field(1.0, &g).unwrap();
        let w = ScalarField::constant(&g, 1.0);
        let p = distribution(&v, &w, 64).unwrap();
        let inv = mu_of_a(&p).unwrap();
        assert_abs_diff_eq!(inv.eval(PI).unwrap(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(inv.eval(p.masses[0]).unwrap(), p.levels[0]);
        let dmu = p.level_spacing();
        assert!((inv.eval(PI / 2.0).unwrap() - 2.0 * (4.0f64 / 3.0).ln()).abs() < dmu);
        for (&mu, &a) in p.levels.iter().zip(&p.masses).skip(1).take(60) {
            assert!((inv.eval(a).unwrap() - mu).abs() < dmu);
        }
        assert!(inv.eval(4.0).is_err());
    }

    #[test]
    fn inverse_rejects_increasing_profile() {
        let p = DistributionProfile {
            levels: vec![0.0, 1.0, 2.0],
            masses: vec![1.0, 2.0, 0.5],
            total: 1.0,
            weight_tag: "test".into(),
        };
        assert!(matches!(mu_of_a(&p), Err(Error::Inconsistency(_))));
    }

    #[test]
    fn bubble_h_and_its_derivative() {
        let g = grid();
        let (u, v, _) = build_bubble_field(1.0, &g).unwrap();
        let w = ScalarField::constant(&g, 1.0);
        let p = distribution(&v, &w, 64).unwrap();
        let h = H_of_a(&u, &v, 2.0, &p).unwrap();
        for k in 0..p.len() {
            let a = h.a[k];
            assert_abs_diff_eq!(h.h[k], 8.0 * PI * a / (a + PI), epsilon = 1e-8);
        }
        assert_abs_diff_eq!(*h.h.last().unwrap(), 0.0, epsilon = 1e-12);
        assert!(h.h.windows(2).all(|x| x[1] <= x[0] + 1e-12));
        for k in p.interior() {
            let dh = h.derivative(k).unwrap();
            let expected = 2.0 * h.levels[k].exp();
            assert!((dh - expected).abs() < 0.02 * expected);
        }
        let zero = H_of_a(&u, &v, 0.0, &p).unwrap();
        assert!(zero.h.iter().all(|&x| x == 0.0));
        assert!(H_of_a(&u, &v, -1.0, &p).is_err());
    }

    #[test]
    fn bubble_differential_inequality_is_sharp() {
        let g = grid();
        let (u, v, _) = build_bubble_field(1.0, &g).unwrap();
        let w = ScalarField::constant(&g, 1.0);
        let p = distribution(&v, &w, 64).unwrap();
        let h = H_of_a(&u, &v, 2.0, &p).unwrap();
        let r = diff_ineq_check(&p, &h);
        assert!(r.pass && r.lhs.abs() < 1e-3, "{r:?}");

        let pp = P_profile(&p, &h);
        assert!(pp.report.pass);
        assert!(pp.p.iter().all(|x| x.abs() < 1e-3));
    }

    #[test]
    fn paraboloid_needs_enough_curvature_budget() {
        // v = 1 - r² with u = v: -Δv = 4 ≤ λ e^u holds for λ ≥ 4.
        let g = grid();
        let v = ScalarField::from_fn(&g, |r, _| 1.0 - r * r);
        let w = ScalarField::constant(&g, 1.0);
        let p = distribution(&v, &w, 64).unwrap();
        let strong = diff_ineq_check(&p, &H_of_a(&v, &v, 4.0, &p).unwrap());
        assert!(strong.pass && strong.lhs < -1e-3);
        let weak = diff_ineq_check(&p, &H_of_a(&v, &v, 1.0, &p).unwrap());
        assert!(!weak.pass);
        let none = diff_ineq_check(&p, &H_of_a(&v, &v, 0.0, &p).unwrap());
        assert!(!none.pass && none.lhs > 0.0);
        let flat = P_profile(&p, &H_of_a(&v, &v, 0.0, &p).unwrap());
        assert!(flat.p.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn p_vanishes_for_every_bubble_with_unit_curvature_budget() {
        let g = grid();
        for beta in [0.5, 2.0] {
            let (u, v, hc) = build_bubble_field(beta, &g).unwrap();
            let w = ScalarField::constant(&g, hc.exp());
            let p = distribution(&v, &w, 64).unwrap();
            let pp = P_profile(&p, &H_of_a(&u, &v, 2.0, &p).unwrap());
            assert!(pp.report.pass, "beta {beta}: {:?}", pp.report);
            assert!(pp.p.iter().all(|x| x.abs() < 1e-3));
        }
    }

    #[test]
    fn bol_equality_on_caps() {
        let g = grid();
        for beta in [0.5, 1.0, 2.0] {
            let (u, _, h) = build_bubble_field(beta, &g).unwrap();
            let r = bol_check(&u, &BoundaryData::Constant(h), 2.0).unwrap();
            let lhs = (4.0 * PI * beta / (1.0 + beta * beta)).powi(2);
            assert_abs_diff_eq!(r.lhs, lhs, epsilon = 1e-12 * lhs);
            assert!((r.lhs - r.rhs).abs() <= 1e-8 * r.rhs && r.pass);
        }
        let flat = ScalarField::constant(&g, 0.0);
        let r = bol_check(&flat, &BoundaryData::Fourier(FourierCoeffs::zeros(0)), 0.0).unwrap();
        assert_abs_diff_eq!(r.lhs, 4.0 * PI * PI, epsilon = 1e-11);
        assert_abs_diff_eq!(r.rhs, 4.0 * PI * PI, epsilon = 1e-11);
        assert!(bol_check(&flat, &BoundaryData::Constant(0.0), -1.0).is_err());
    }
}
