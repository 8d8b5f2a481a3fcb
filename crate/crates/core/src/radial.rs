//! Rotationally symmetric conformal factors `u(r)` with closed-form
//! derivatives.

use serde::{Deserialize, Serialize};

/// Analytic radial families of metrics `e^{u(r)}|dz|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RadialFamily {
    /// `u ≡ 0`.
    Flat,
    /// `u = log(4β²/(1+β²r²)²)`, curvature `+1`; `β = 1` is the round sphere
    /// with the equator on `r = 1`.
    Bubble { beta: f64 },
    /// `u = log(4s²/(1-s²r²)²)` on `r < 1/s`, curvature `-1`.
    Hyperbolic { scale: f64 },
}

impl RadialFamily {
    pub fn sphere() -> Self {
        RadialFamily::Bubble { beta: 1.0 }
    }

    /// Open radial domain bound.
    pub fn r_max(&self) -> f64 {
        match *self {
            RadialFamily::Hyperbolic { scale } => 1.0 / scale,
            _ => f64::INFINITY,
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match *self {
            RadialFamily::Flat => 0.0,
            RadialFamily::Bubble { beta } => {
                let b2 = beta * beta;
                (4.0 * b2).ln() - 2.0 * (b2 * r * r).ln_1p()
            }
            RadialFamily::Hyperbolic { scale } => {
                let s2 = scale * scale;
                (4.0 * s2).ln() - 2.0 * (-s2 * r * r).ln_1p()
            }
        }
    }

    pub fn d1(&self, r: f64) -> f64 {
        match *self {
            RadialFamily::Flat => 0.0,
            RadialFamily::Bubble { beta } => {
                let b2 = beta * beta;
                -4.0 * b2 * r / (1.0 + b2 * r * r)
            }
            RadialFamily::Hyperbolic { scale } => {
                let s2 = scale * scale;
                4.0 * s2 * r / (1.0 - s2 * r * r)
            }
        }
    }

    pub fn d2(&self, r: f64) -> f64 {
        match *self {
            RadialFamily::Flat => 0.0,
            RadialFamily::Bubble { beta } => {
                let b2 = beta * beta;
                let q = 1.0 + b2 * r * r;
                -4.0 * b2 * (1.0 - b2 * r * r) / (q * q)
            }
            RadialFamily::Hyperbolic { scale } => {
                let s2 = scale * scale;
                let q = 1.0 - s2 * r * r;
                4.0 * s2 * (1.0 + s2 * r * r) / (q * q)
            }
        }
    }

    /// `u'' + u'/r`, with the limit `2u''(0)` at the origin.
    pub fn laplacian(&self, r: f64) -> f64 {
        if r == 0.0 {
            2.0 * self.d2(0.0)
        } else {
            self.d2(r) + self.d1(r) / r
        }
    }

    /// Gauss curvature `K = -½ e^{-u} Δu`.
    pub fn curvature(&self, r: f64) -> f64 {
        -0.5 * (-self.value(r)).exp() * self.laplacian(r)
    }

    pub fn name(&self) -> &'static str {
        match self {
            RadialFamily::Flat => "flat",
            RadialFamily::Bubble { .. } => "bubble",
            RadialFamily::Hyperbolic { .. } => "hyperbolic",
        }
    }
}
