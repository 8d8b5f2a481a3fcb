//! Green's function of the unit disk, potentials of finite atomic measures,
//! and the Huber inequality chain.
//!
//! Sign convention: `G(x, y) = (1/2π) log(|1 - x ȳ| / |x - y|) ≥ 0`, so the
//! outward normal derivative on the unit circle is negative and its
//! magnitude integrates to one.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::check::{num, nums, CheckReport};
use crate::error::{invalid, Error, Result};
use crate::fourier::FourierCoeffs;
use crate::geometry::{boundary_length, QUADRATURE_TOL};
use crate::harmonic::{poisson_extend, HarmonicField};
use crate::pole::{exit_radius, PoleQuadrature, Singularity};
use crate::quadrature::{gauss_jacobi_left, radial_jacobi};

fn require_interior(y: Complex64) -> Result<()> {
    if !(y.norm() < 1.0) {
        return Err(invalid(format!("pole {y} is not interior to the unit disk")));
    }
    Ok(())
}

/// `G` without argument checks; `+∞` at the pole.
fn green_raw(x: Complex64, y: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    ((one - x * y.conj()).norm() / (x - y).norm()).ln() / TAU
}

/// `G(x, y)` for `|x| ≤ 1`, `|y| < 1`, `x ≠ y`.
pub fn green_disk(x: Complex64, y: Complex64) -> Result<f64> {
    require_interior(y)?;
    if x.norm() > 1.0 + 1e-12 {
        return Err(invalid(format!("point {x} lies outside the closed unit disk")));
    }
    if x == y {
        return Err(Error::Singularity(format!("Green's function evaluated at its pole {y}")));
    }
    Ok(green_raw(x, y).max(0.0))
}

/// Trapezoid node count making the geometric error `|y|^K` negligible.
fn flux_nodes(y: Complex64) -> usize {
    let r = y.norm();
    if r == 0.0 {
        64
    } else {
        ((-37.0 / r.ln()).ceil() as usize).max(64)
    }
}

/// `∂_r G(e^{iθ}, y)` from the gradient of both logarithms.
fn radial_derivative_on_circle(theta: f64, y: Complex64) -> f64 {
    let e = Complex64::from_polar(1.0, theta);
    let one = Complex64::new(1.0, 0.0);
    let image = (-e * y.conj() / (one - e * y.conj())).re;
    let pole = (e / (e - y)).re;
    (image - pole) / TAU
}

/// `lhs = |∮ ∂_ν G(·, y) dσ|`, `rhs = 1`.
pub fn green_flux_check(y: Complex64) -> Result<CheckReport> {
    require_interior(y)?;
    let k = flux_nodes(y);
    let h = TAU / k as f64;
    let flux: f64 = (0..k).map(|j| radial_derivative_on_circle(h * j as f64, y)).sum::<f64>() * h;
    let lhs = flux.abs();
    Ok(CheckReport::new("green_flux", lhs, 1.0, -(lhs - 1.0).abs(), QUADRATURE_TOL)
        .with("nodes", k)
        .with("pole", nums(&[y.re, y.im])))
}

/// One atom of mass `mass > 0` at an interior point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub mass: f64,
    pub location: Complex64,
}

impl Atom {
    pub fn new(mass: f64, location: Complex64) -> Self {
        Atom { mass, location }
    }
}

/// `μ = μ₂ - μ₁` with finitely many atoms, plus the origin term
/// `p₀ = 2·alpha0·log(1/|x|)`, which counts as a mass `2π·alpha0` at `0`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PointMassMeasure {
    pub positive: Vec<Atom>,
    pub negative: Vec<Atom>,
    pub alpha0: f64,
}

impl PointMassMeasure {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(mass: f64, location: Complex64) -> Self {
        PointMassMeasure {
            positive: vec![Atom::new(mass, location)],
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for a in self.positive.iter().chain(&self.negative) {
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(invalid(format!("atom mass must be positive, got {}", a.mass)));
            }
            require_interior(a.location)?;
        }
        if !(self.alpha0 >= 0.0 && self.alpha0.is_finite()) {
            return Err(invalid(format!("alpha0 must be non-negative, got {}", self.alpha0)));
        }
        Ok(())
    }

    /// `α = μ₂(D)`, including `2π·alpha0`.
    pub fn positive_mass(&self) -> f64 {
        self.positive.iter().map(|a| a.mass).sum::<f64>() + TAU * self.alpha0
    }

    pub fn negative_mass(&self) -> f64 {
        self.negative.iter().map(|a| a.mass).sum()
    }

    /// All atoms sit at the origin.
    pub fn is_centered(&self) -> bool {
        self.positive.iter().chain(&self.negative).all(|a| a.location == Complex64::new(0.0, 0.0))
    }

    /// `e^{p}` behaves like `|x - c|^{-e}` near each atom; coincident atoms
    /// are merged.
    pub fn singularities(&self) -> Vec<Singularity> {
        let mut out: Vec<Singularity> = Vec::new();
        let mut add = |c: Complex64, e: f64| match out.iter_mut().find(|s| s.center == c) {
            Some(s) => s.exponent += e,
            None => out.push(Singularity::new(c, e)),
        };
        for a in &self.positive {
            add(a.location, a.mass / PI);
        }
        for a in &self.negative {
            add(a.location, -a.mass / PI);
        }
        if self.alpha0 > 0.0 {
            add(Complex64::new(0.0, 0.0), 2.0 * self.alpha0);
        }
        out
    }

    fn potential_raw(&self, x: Complex64) -> f64 {
        let mut p = 0.0;
        for a in &self.positive {
            p += 2.0 * a.mass * green_raw(x, a.location);
        }
        for a in &self.negative {
            p -= 2.0 * a.mass * green_raw(x, a.location);
        }
        if self.alpha0 > 0.0 {
            p += 2.0 * self.alpha0 * (1.0 / x.norm()).ln();
        }
        p
    }
}

/// `p(x) = Σ ±2 α_k G(x, y_k) + 2·alpha0·log(1/|x|)`.
pub fn potential(m: &PointMassMeasure, x: Complex64) -> Result<f64> {
    m.validate()?;
    if x.norm() > 1.0 + 1e-12 {
        return Err(invalid(format!("point {x} lies outside the closed unit disk")));
    }
    let at_atom = m.positive.iter().chain(&m.negative).any(|a| a.location == x);
    if at_atom || (m.alpha0 > 0.0 && x == Complex64::new(0.0, 0.0)) {
        return Err(Error::Singularity(format!("potential evaluated at an atom {x}")));
    }
    Ok(m.potential_raw(x))
}

/// Checks `2(2π - α)∫ e^{h+2αG(·,y)} ≤ 4π∫e^h ≤ (∮ e^{h/2})²` for one atom.
pub fn huber_point_check(h: &FourierCoeffs, alpha: f64, y: Complex64, quad: &PoleQuadrature) -> Result<CheckReport> {
    if !(alpha >= 0.0) {
        return Err(invalid(format!("α must be non-negative, got {alpha}")));
    }
    require_interior(y)?;
    let m = if alpha == 0.0 {
        PointMassMeasure::empty()
    } else {
        PointMassMeasure::single(alpha, y)
    };
    let mut report = huber_chain(h, &m, quad, Some(y))?;
    report.name = "huber_point".into();
    Ok(report)
}

/// Same chain with `p = potential(m, ·)`.
///
/// `lhs = 2(2π - α)∫e^{h+p}`, `rhs = (∮ e^{h/2})²`; `slack` is the smaller
/// of `4πA - lhs` and `rhs - 4πA`.
pub fn huber_measure_check(h: &FourierCoeffs, m: &PointMassMeasure, quad: &PoleQuadrature) -> Result<CheckReport> {
    let mut report = huber_chain(h, m, quad, None)?;
    report.name = "huber_measure".into();
    Ok(report)
}

fn huber_chain(
    h: &FourierCoeffs,
    m: &PointMassMeasure,
    quad: &PoleQuadrature,
    pole: Option<Complex64>,
) -> Result<CheckReport> {
    m.validate()?;
    let field = poisson_extend(h)?;
    let alpha = m.positive_mass();
    if alpha >= TAU {
        return Err(invalid(format!("positive mass {alpha} must stay below 2π")));
    }
    let mut sings = m.singularities();
    if let Some(y) = pole {
        if !sings.iter().any(|s| s.center == y) {
            sings.push(Singularity::regular(y));
        }
    }
    // The area integral uses the same centers with regular exponents, so
    // that with no mass both integrals evaluate identical expressions.
    let regular: Vec<Singularity> = sings.iter().map(|s| Singularity::regular(s.center)).collect();
    let area = quad.integrate(&regular, |x| field_at(&field, x).exp())?;
    let weighted = quad.integrate(&sings, |x| (field_at(&field, x) + m.potential_raw(x)).exp())?;
    let q1 = 2.0 * (TAU - alpha) * weighted;
    let q2 = 4.0 * PI * area;
    let length = boundary_length(h);
    let q3 = length * length;
    let (s1, s2) = (q2 - q1, q3 - q2);
    let mut report = CheckReport::new("huber", q1, q3, s1.min(s2), QUADRATURE_TOL)
        .with("alpha", num(alpha))
        .with("area", num(area))
        .with("boundary_length", num(length))
        .with("four_pi_area", num(q2))
        .with("negative_mass", num(m.negative_mass()))
        .with("nphi", quad.nphi)
        .with("nrho", quad.nrho)
        .with("slack_1", num(s1))
        .with("slack_2", num(s2));
    if let Some(y) = pole {
        report.insert("pole", nums(&[y.re, y.im]));
    }
    Ok(report)
}

fn field_at(h: &HarmonicField, x: Complex64) -> f64 {
    h.eval_at(x)
}

/// Radial data for the superlevel form of the Huber chain: the sub-disk
/// `{|x| < radius}` with weight `e^{h + p}`, `h` constant and the measure
/// centered.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperlevelScenario {
    pub h: f64,
    pub measure: PointMassMeasure,
    pub radius: f64,
    /// Level `μ` when the disk comes from a bubble.
    pub level: Option<f64>,
}

impl SuperlevelScenario {
    /// Superlevel disk `{v > μ}` of the bubble `v = 2 log((1+β²)/(1+β²r²))`,
    /// weighted by the bubble's constant harmonic part.
    pub fn from_bubble(beta: f64, measure: PointMassMeasure, level: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid(format!("bubble parameter must be positive, got {beta}")));
        }
        let b2 = beta * beta;
        let top = 2.0 * (1.0 + b2).ln();
        if !(0.0..top).contains(&level) {
            return Err(invalid(format!("level {level} outside the bubble range [0, {top})")));
        }
        let r2 = ((1.0 + b2) * (-0.5 * level).exp() - 1.0) / b2;
        let h = (4.0 * b2).ln() - 2.0 * b2.ln_1p();
        Ok(SuperlevelScenario {
            h,
            measure,
            radius: r2.max(0.0).sqrt().min(1.0),
            level: Some(level),
        })
    }
}

/// `lhs = 2(2π - μ₂(D))∫_{D_μ} e^{h+p}`, `rhs = (∮_{∂D_μ} e^{(h+p)/2})²`.
pub fn huber_superlevel_check(sc: &SuperlevelScenario, nrho: usize) -> Result<CheckReport> {
    sc.measure.validate()?;
    if !sc.measure.is_centered() {
        return Err(Error::Unsupported(
            "superlevel Huber check needs a centered measure (single-component superlevel sets)".into(),
        ));
    }
    if !(sc.radius > 0.0 && sc.radius <= 1.0) {
        return Err(invalid(format!("sub-disk radius {} outside (0, 1]", sc.radius)));
    }
    let alpha = sc.measure.positive_mass();
    if alpha >= TAU {
        return Err(invalid(format!("positive mass {alpha} must stay below 2π")));
    }
    // e^{p} = |x|^{-e}
    let e: f64 = sc.measure.singularities().iter().map(|s| s.exponent).sum();
    let b = 1.0 - e;
    let rule = gauss_jacobi_left(nrho.max(2), b);
    let weighted: f64 = radial_jacobi(&rule, b, sc.radius)
        .into_iter()
        .map(|(r, w)| w * (sc.h + sc.measure.potential_raw(Complex64::new(r, 0.0))).exp() * r.powf(1.0 - b))
        .sum::<f64>()
        * TAU;
    let lhs = 2.0 * (TAU - alpha) * weighted;
    let edge = Complex64::new(sc.radius, 0.0);
    let length = TAU * sc.radius * (0.5 * (sc.h + sc.measure.potential_raw(edge))).exp();
    let rhs = length * length;
    let mut report = CheckReport::new("huber_superlevel", lhs, rhs, rhs - lhs, QUADRATURE_TOL)
        .with("alpha", num(alpha))
        .with("boundary_length", num(length))
        .with("radius", num(sc.radius))
        .with("weighted_area", num(weighted));
    if let Some(mu) = sc.level {
        report.insert("level", num(mu));
    }
    Ok(report)
}

/// Upper end of the sampled Green levels: `{G > t}` shrinks to radius
/// about `1/20` around a centered pole.
fn green_level_max() -> f64 {
    20f64.ln() / TAU
}

/// `t` on a ray from `y` where `G(y + ρ e^{iφ}, y) = t`.
fn level_radius(y: Complex64, dir: Complex64, t: f64, exit: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, exit);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if green_raw(y + dir * mid, y) > t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Checks `G(a) ≤ (1/4π) log(A/a)` where `a(t) = ∫_{G(·,y)>t} e^h` and
/// `A = ∫ e^h`; `G(a)` is the level `t` enclosing mass `a`. `slack` is the
/// smallest `rhs - lhs` over `nlevels` levels in `(0, log(20)/2π]`.
pub fn green_level_bound_check(
    y: Complex64,
    h: &FourierCoeffs,
    nlevels: usize,
    quad: &PoleQuadrature,
) -> Result<CheckReport> {
    require_interior(y)?;
    if nlevels < 2 {
        return Err(invalid("need at least two Green levels"));
    }
    let field = poisson_extend(h)?;
    let weight = |x: Complex64| field.eval_at(x).exp();
    let total = quad.integrate(&[Singularity::regular(y)], weight)?;
    let t_max = green_level_max();
    let levels: Vec<f64> = (1..=nlevels).map(|k| t_max * k as f64 / nlevels as f64).collect();
    let rule = gauss_jacobi_left(quad.nrho, 1.0);
    let dphi = TAU / quad.nphi as f64;
    let rays = quad.exec.map(quad.nphi, |j| {
        let dir = Complex64::from_polar(1.0, dphi * j as f64);
        let exit = exit_radius(y, dir);
        levels
            .iter()
            .map(|&t| {
                let rho = level_radius(y, dir, t, exit);
                radial_jacobi(&rule, 1.0, rho)
                    .into_iter()
                    .map(|(r, w)| w * weight(y + dir * r))
                    .sum::<f64>()
            })
            .collect::<Vec<f64>>()
    });
    let masses: Vec<f64> = (0..levels.len())
        .map(|k| rays.iter().map(|r| r[k]).sum::<f64>() * dphi)
        .collect();
    let bounds: Vec<f64> = masses.iter().map(|&a| (total / a).ln() / (4.0 * PI)).collect();
    let slacks: Vec<f64> = bounds.iter().zip(&levels).map(|(b, t)| b - t).collect();
    let worst = slacks
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    Ok(CheckReport::new("green_bound", levels[worst], bounds[worst], slacks[worst], 1e-6)
        .with("levels", nums(&levels))
        .with("masses", nums(&masses))
        .with("pole", nums(&[y.re, y.im]))
        .with("slack_samples", nums(&slacks))
        .with("total", num(total)))
}
