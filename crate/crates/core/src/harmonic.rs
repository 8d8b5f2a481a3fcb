//! Harmonic extension of boundary data and the conformal map `g` with
//! `|g'|² = e^h`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fourier::{series_exp, FourierCoeffs, TaylorCoeffs};

/// Harmonic function on the closed unit disk with given boundary values,
/// `h(r, θ) = Σ c_n r^{|n|} e^{inθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicField {
    boundary: FourierCoeffs,
}

impl HarmonicField {
    pub fn boundary(&self) -> &FourierCoeffs {
        &self.boundary
    }

    /// Truncation order of the evaluator.
    pub fn n_max(&self) -> usize {
        self.boundary.n_max()
    }

    /// Value at polar coordinates `(r, θ)`, `0 <= r <= 1`.
    pub fn eval(&self, r: f64, theta: f64) -> f64 {
        let c = &self.boundary;
        let mut acc = c.get(0).re;
        for n in 1..=c.n_max() as i64 {
            let wave = Complex64::from_polar(r.powi(n as i32), n as f64 * theta);
            acc += 2.0 * (c.get(n) * wave).re;
        }
        acc
    }

    pub fn eval_at(&self, z: Complex64) -> f64 {
        let (r, theta) = z.to_polar();
        self.eval(r, theta)
    }

    pub fn boundary_min_max(&self, samples: usize) -> (f64, f64) {
        self.boundary
            .real_samples(samples)
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

/// Harmonic extension of real boundary data.
pub fn poisson_extend(u: &FourierCoeffs) -> Result<HarmonicField> {
    u.require_hermitian()?;
    Ok(HarmonicField { boundary: u.clone() })
}

/// Holomorphic `F` on the disk with `Re F = h` and `Im F(0) = 0`:
/// `F_0 = c_0`, `F_n = 2 c_n`.
pub fn holomorphic_completion(u: &FourierCoeffs) -> Result<TaylorCoeffs> {
    u.require_hermitian()?;
    let mut coeffs = Vec::with_capacity(u.n_max() + 1);
    coeffs.push(Complex64::new(u.get(0).re, 0.0));
    coeffs.extend((1..=u.n_max() as i64).map(|n| u.get(n) * 2.0));
    Ok(TaylorCoeffs::new(coeffs))
}

/// The holomorphic data attached to boundary values `u`.
///
/// `g' = exp(F/2)` and `g` is its primitive with `g(0) = 0`, so that
/// `|g'|² = e^{Re F} = e^h` and `g'(0) = e^{F_0/2} > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalFactor {
    pub f: TaylorCoeffs,
    pub g_prime: TaylorCoeffs,
    pub g: TaylorCoeffs,
}

impl ConformalFactor {
    /// Smallest `|g'|` over a polar sample of the closed disk.
    pub fn min_derivative_modulus(&self, points: &[Complex64]) -> f64 {
        points
            .iter()
            .map(|&z| self.g_prime.eval(z).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Builds `g` with `|g'(z)|² = e^{h(z)}`, Taylor series truncated at `m_max`.
pub fn build_conformal_factor(u: &FourierCoeffs, m_max: usize) -> Result<ConformalFactor> {
    if m_max < 2 * u.n_max() {
        return Err(invalid(format!(
            "Taylor order {m_max} below twice the boundary bandwidth {}",
            u.n_max()
        )));
    }
    let f = holomorphic_completion(u)?;
    let g_prime = series_exp(&f.scale(Complex64::new(0.5, 0.0)), m_max)?;
    let g = g_prime.primitive();
    Ok(ConformalFactor { f, g_prime, g })
}

/// Polar sample of the closed unit disk: `nr` radii `i/(nr-1)` (origin and
/// boundary included) times `ntheta` equispaced angles.
pub fn disk_test_points(nr: usize, ntheta: usize) -> Vec<Complex64> {
    assert!(nr >= 2 && ntheta >= 1);
    let mut pts = Vec::with_capacity(nr * ntheta);
    for i in 0..nr {
        let r = i as f64 / (nr - 1) as f64;
        for j in 0..ntheta {
            pts.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / ntheta as f64));
        }
    }
    pts
}

/// `max |2 log|g'(z)| - h(z)|` over `points`.
///
/// `g'` is evaluated from its Taylor series and `h` from the polar form of
/// the harmonic extension, so the two sides share no code path.
pub fn residual_check(cf: &ConformalFactor, u: &FourierCoeffs, points: &[Complex64]) -> Result<f64> {
    let h = poisson_extend(u)?;
    if let Some(p) = points.iter().find(|p| p.norm() > 1.0 + 1e-12) {
        return Err(invalid(format!("point {p} outside the closed unit disk")));
    }
    Ok(points
        .iter()
        .map(|&z| (2.0 * cf.g_prime.eval(z).norm().ln() - h.eval_at(z)).abs())
        .fold(0.0, f64::max))
}
