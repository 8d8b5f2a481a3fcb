//! Area and boundary length of `g(B₁)`, and the Nehari inequality
//! `4π·Area ≤ Length²`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::check::{num, CheckReport};
use crate::error::{invalid, Error, Result};
use crate::fourier::{FourierCoeffs, TaylorCoeffs, DEFAULT_TAYLOR_ORDER};
use crate::harmonic::build_conformal_factor;

/// Default absolute tolerance for quadrature-based checks.
pub const QUADRATURE_TOL: f64 = 1e-8;

/// `π Σ_{n≥1} n |a_n|²`, the area of `g(B₁)` counted with multiplicity.
pub fn area_series(g: &TaylorCoeffs) -> f64 {
    PI * g.weighted_tail(0)
}

/// Area enclosed by the boundary curve `g(∂B₁)` from the contour integral
/// `(1/4i) ∮ (ḡ g' dz - g ḡ' dz̄)`, evaluated with the trapezoid rule on
/// `4 ×` the bandwidth of `g`.
///
/// The boundary data must come from a holomorphic `g`: energy in negative
/// modes is reported as an inconsistency.
pub fn area_stokes(g_boundary: &FourierCoeffs) -> Result<f64> {
    if !g_boundary.is_finite() {
        return Err(invalid("non-finite boundary coefficient"));
    }
    let scale: f64 = g_boundary.modes().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
    let anti: f64 = g_boundary
        .modes()
        .filter(|&(n, _)| n < 0)
        .map(|(_, c)| c.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if anti > 1e-8 * scale.max(1e-300) {
        return Err(Error::Inconsistency(format!(
            "boundary data has anti-holomorphic content {anti:e}"
        )));
    }
    let bandwidth = g_boundary
        .modes()
        .filter(|&(n, c)| n > 0 && c.norm() > 0.0)
        .map(|(n, _)| n as usize)
        .max()
        .unwrap_or(1);
    let g = TaylorCoeffs::new((0..=bandwidth as i64).map(|n| g_boundary.get(n)).collect());
    let dg = g.derivative();
    let k = (4 * bandwidth).max(8);
    let i = Complex64::new(0.0, 1.0);
    let total: Complex64 = (0..k)
        .map(|j| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64);
            let gz = g.eval(z);
            let dgz = dg.eval(z);
            // dz = i z dθ, dz̄ = -i z̄ dθ
            gz.conj() * dgz * (i * z) - gz * dgz.conj() * (-i * z.conj())
        })
        .sum();
    let value = total * (2.0 * PI / k as f64) / (4.0 * i);
    if value.im.abs() > 1e-8 * value.re.abs().max(1.0) {
        return Err(Error::Inconsistency(format!(
            "contour integral has imaginary part {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Number of trapezoid nodes used for boundary integrals of `e^{u/2}`.
fn boundary_nodes(u: &FourierCoeffs) -> usize {
    (8 * (u.n_max() + 1)).max(256)
}

/// `∫_0^{2π} e^{u(θ)/2} dθ`, the boundary length of the metric `e^u|dz|²`.
pub fn boundary_length(u: &FourierCoeffs) -> f64 {
    let k = boundary_nodes(u);
    let h = 2.0 * PI / k as f64;
    u.real_samples(k).iter().map(|&v| (0.5 * v).exp()).sum::<f64>() * h
}

/// `true` iff `Σ_{n≥2} n|a_n|² ≤ tol · Σ_{n≥1} n|a_n|²`, i.e. `g` is a
/// rotation-dilation of the identity up to `tol`.
pub fn equality_case_detect(g: &TaylorCoeffs, tol: f64) -> Result<bool> {
    let total = g.weighted_tail(0);
    if total == 0.0 {
        return Err(invalid("zero series has no equality case"));
    }
    Ok(g.weighted_tail(1) <= tol * total)
}

/// Nehari check with the default Taylor order and tolerance.
pub fn nehari_check(u: &FourierCoeffs) -> Result<CheckReport> {
    nehari_check_with(u, DEFAULT_TAYLOR_ORDER.max(2 * u.n_max()), QUADRATURE_TOL)
}

/// `lhs = 4π·area_series(g)`, `rhs = boundary_length(u)²`, `slack = rhs - lhs`.
pub fn nehari_check_with(u: &FourierCoeffs, m_max: usize, tol: f64) -> Result<CheckReport> {
    let cf = build_conformal_factor(u, m_max)?;
    let area = area_series(&cf.g);
    let length = boundary_length(u);
    let lhs = 4.0 * PI * area;
    let rhs = length * length;
    let stokes = area_stokes(&cf.g.boundary_coeffs())?;
    let equality = equality_case_detect(&cf.g, 1e-12)?;
    Ok(CheckReport::new("nehari", lhs, rhs, rhs - lhs, tol)
        .with("area_series", num(area))
        .with("area_stokes", num(stokes))
        .with("boundary_length", num(length))
        .with("boundary_nodes", boundary_nodes(u))
        .with("equality_case", equality)
        .with("m_max", m_max)
        .with("n_max", u.n_max()))
}
