//! Quadrature on the unit disk for integrands with algebraic point
//! singularities `|x - c|^{-e}`.
//!
//! Each center carries polar coordinates `x = c + ρe^{iφ}`: a trapezoid rule
//! in `φ` and a Gauss–Jacobi rule in `ρ ∈ (0, R(φ))` whose weight `ρ^{1-e}`
//! absorbs both the area element and the singularity. Centers are blended by
//! the partition of unity `ψ_k = 1 / (1 + Σ_{l≠k} (d_k/d_l)^6)`, so every
//! center only sees its own singularity at leading order.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::grid::PolarGrid;
use crate::par::Exec;
use crate::quadrature::{gauss_jacobi_left, radial_jacobi, Rule};

const BLEND_POWER: i32 = 6;

/// Integrand behaves like `|x - center|^{-exponent}` near `center`.
/// `exponent < 2` for integrability; negative values describe zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub center: Complex64,
    pub exponent: f64,
}

impl Singularity {
    pub fn new(center: Complex64, exponent: f64) -> Self {
        Singularity { center, exponent }
    }

    /// A regular point used as a polar origin.
    pub fn regular(center: Complex64) -> Self {
        Singularity { center, exponent: 0.0 }
    }
}

/// Pole-centered polar quadrature: `nphi` angles per center and `nrho`
/// Gauss–Jacobi radii per angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleQuadrature {
    pub nphi: usize,
    pub nrho: usize,
    pub exec: Exec,
}

impl PoleQuadrature {
    pub fn new(nphi: usize, nrho: usize) -> Result<Self> {
        if nphi < 8 || nrho < 4 {
            return Err(invalid(format!("pole quadrature {nphi} x {nrho} too small")));
        }
        Ok(PoleQuadrature {
            nphi,
            nrho,
            exec: Exec::default(),
        })
    }

    /// Same resolution and execution mode as `grid`.
    pub fn from_grid(grid: &PolarGrid) -> Self {
        PoleQuadrature {
            nphi: grid.ntheta().max(8),
            nrho: grid.nr().max(4),
            exec: grid.exec(),
        }
    }

    /// `∫_{B₁} f` where `f` may be singular at the listed centers. With no
    /// centers the origin is used as a regular polar origin.
    pub fn integrate<F>(&self, singularities: &[Singularity], f: F) -> Result<f64>
    where
        F: Fn(Complex64) -> f64 + Sync + Send,
    {
        let origin = [Singularity::regular(Complex64::new(0.0, 0.0))];
        let centers = if singularities.is_empty() { &origin[..] } else { singularities };
        for (k, s) in centers.iter().enumerate() {
            if !(s.center.norm() < 1.0) {
                return Err(invalid(format!("singular point {} is not interior", s.center)));
            }
            if !(s.exponent < 2.0) || !s.exponent.is_finite() {
                return Err(invalid(format!("exponent {} is not integrable in two dimensions", s.exponent)));
            }
            if centers[..k].iter().any(|t| t.center == s.center) {
                return Err(invalid(format!("singular point {} listed twice", s.center)));
            }
        }
        let rules: Vec<(f64, Rule)> = centers
            .iter()
            .map(|s| {
                let b = 1.0 - s.exponent;
                (b, gauss_jacobi_left(self.nrho, b))
            })
            .collect();
        let dphi = TAU / self.nphi as f64;
        let n = centers.len() * self.nphi;
        Ok(self.exec.sum(n, |idx| {
            let k = idx / self.nphi;
            let phi = dphi * (idx % self.nphi) as f64;
            let c = centers[k].center;
            let dir = Complex64::from_polar(1.0, phi);
            let (b, rule) = &rules[k];
            let radius = exit_radius(c, dir);
            let ray: f64 = radial_jacobi(rule, *b, radius)
                .into_iter()
                .map(|(rho, w)| {
                    let x = c + dir * rho;
                    let psi = blend(centers, k, x);
                    // f·ρ divided by the rule's weight ρ^b
                    w * psi * f(x) * rho.powf(1.0 - b)
                })
                .sum();
            ray * dphi
        }))
    }
}

/// Distance from `c` to the unit circle along the unit direction `dir`.
pub fn exit_radius(c: Complex64, dir: Complex64) -> f64 {
    let p = (c.conj() * dir).re;
    -p + (p * p + 1.0 - c.norm_sqr()).sqrt()
}

fn blend(centers: &[Singularity], k: usize, x: Complex64) -> f64 {
    if centers.len() == 1 {
        return 1.0;
    }
    let dk = (x - centers[k].center).norm();
    let mut denom = 1.0;
    for (l, s) in centers.iter().enumerate() {
        if l != k {
            let dl = (x - s.center).norm();
            if dl == 0.0 {
                return 0.0;
            }
            denom += (dk / dl).powi(BLEND_POWER);
        }
    }
    1.0 / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    #[test]
    fn exit_radius_lands_on_circle() {
        for &center in &[c(0.0, 0.0), c(0.4, -0.2), c(0.9, 0.0)] {
            for k in 0..12 {
                let dir = Complex64::from_polar(1.0, 0.5 * k as f64);
                let r = exit_radius(center, dir);
                assert!(r > 0.0);
                assert_abs_diff_eq!((center + dir * r).norm(), 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn smooth_integrals_from_any_center() {
        let q = PoleQuadrature::new(64, 24).unwrap();
        for sing in [vec![], vec![Singularity::regular(c(0.5, 0.3))]] {
            assert_abs_diff_eq!(q.integrate(&sing, |_| 1.0).unwrap(), PI, epsilon = 1e-12);
            assert_abs_diff_eq!(q.integrate(&sing, |x| x.norm_sqr()).unwrap(), PI / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn centered_power_singularity_is_exact() {
        // ∫_{B₁} |x|^{-e} = 2π / (2 - e)
        let q = PoleQuadrature::new(32, 16).unwrap();
        for e in [-0.5, 0.5, 1.0, 1.7] {
            let got = q.integrate(&[Singularity::new(c(0.0, 0.0), e)], |x| x.norm().powf(-e)).unwrap();
            assert_abs_diff_eq!(got, TAU / (2.0 - e), epsilon = 1e-12);
        }
    }

    #[test]
    fn off_center_singularity() {
        // ∫_{B₁} |x - y|^{-1}: reference from the radial Green identity
        // ∫_{B₁}|x-y|^{-1} = ∫_0^{2π} R(φ) dφ, by a fine trapezoid rule.
        let y = c(0.4, 0.0);
        let reference: f64 = (0..4000)
            .map(|j| exit_radius(y, Complex64::from_polar(1.0, TAU * j as f64 / 4000.0)))
            .sum::<f64>()
            * TAU
            / 4000.0;
        let q = PoleQuadrature::new(128, 24).unwrap();
        let got = q.integrate(&[Singularity::new(y, 1.0)], |x| 1.0 / (x - y).norm()).unwrap();
        assert_abs_diff_eq!(got, reference, epsilon = 1e-11);
    }

    #[test]
    fn two_singularities_blend() {
        let (a, b) = (c(0.3, 0.0), c(-0.3, 0.0));
        let f = |x: Complex64| (x - a).norm().powf(-0.5) + (x - b).norm().powf(-0.5);
        let sings = [Singularity::new(a, 0.5), Singularity::new(b, 0.5)];
        let coarse = PoleQuadrature::new(192, 64).unwrap().integrate(&sings, f).unwrap();
        let fine = PoleQuadrature::new(384, 128).unwrap().integrate(&sings, f).unwrap();
        assert!((coarse - fine).abs() < 1e-7 * fine);
        // each term alone, by symmetry and the single-center rule
        let single = PoleQuadrature::new(192, 48)
            .unwrap()
            .integrate(&[Singularity::new(a, 0.5)], |x| (x - a).norm().powf(-0.5))
            .unwrap();
        assert!((fine - 2.0 * single).abs() < 1e-6 * fine);
    }

    #[test]
    fn rejects_bad_singularities() {
        let q = PoleQuadrature::new(16, 8).unwrap();
        assert!(q.integrate(&[Singularity::new(c(0.0, 0.0), 2.0)], |_| 1.0).is_err());
        assert!(q.integrate(&[Singularity::new(c(1.0, 0.0), 0.5)], |_| 1.0).is_err());
        let s = Singularity::regular(c(0.1, 0.0));
        assert!(q.integrate(&[s, s], |_| 1.0).is_err());
        assert!(PoleQuadrature::new(4, 8).is_err());
    }

    #[test]
    fn modes_agree_bitwise() {
        let mut q = PoleQuadrature::new(64, 16).unwrap();
        let sings = [Singularity::new(c(0.2, 0.1), 0.8), Singularity::regular(c(-0.5, 0.0))];
        let f = |x: Complex64| (x - c(0.2, 0.1)).norm().powf(-0.8) * (1.0 + x.re);
        q.exec = Exec::Sequential;
        let a = q.integrate(&sings, f).unwrap();
        q.exec = Exec::Parallel;
        let b = q.integrate(&sings, f).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
