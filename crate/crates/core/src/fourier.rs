//! Truncated Fourier series on the circle and Taylor series on the disk.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default number of boundary modes.
pub const DEFAULT_BOUNDARY_MODES: usize = 64;
/// Default Taylor truncation order.
pub const DEFAULT_TAYLOR_ORDER: usize = 256;

/// `e^{2πi m/k}`, with the index reduced modulo `k` before the angle is formed.
fn root_of_unity(m: i64, k: usize) -> Complex64 {
    let m = m.rem_euclid(k as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * m / k as f64)
}

/// Coefficients `c_n`, `-n_max <= n <= n_max`, of a trigonometric polynomial
/// `Σ c_n e^{inθ}`. Stored densely, `c_n` at index `n + n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    n_max: usize,
    coeffs: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn zeros(n_max: usize) -> Self {
        FourierCoeffs {
            n_max,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * n_max + 1],
        }
    }

    pub fn constant(c: f64) -> Self {
        let mut out = Self::zeros(0);
        out.coeffs[0] = Complex64::new(c, 0.0);
        out
    }

    /// Builds a series from `(n, c_n)` pairs; unlisted modes are zero.
    pub fn from_modes(modes: &[(i64, Complex64)]) -> Self {
        let n_max = modes.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
        let mut out = Self::zeros(n_max);
        for &(n, c) in modes {
            out.coeffs[(n + n_max as i64) as usize] += c;
        }
        out
    }

    /// Real data `a_0 + Σ a_n cos nθ + b_n sin nθ`, with `cos[n-1] = a_n`
    /// and `sin[n-1] = b_n`. The result is Hermitian by construction.
    pub fn from_real_trig(a0: f64, cos: &[f64], sin: &[f64]) -> Self {
        let n_max = cos.len().max(sin.len());
        let mut out = Self::zeros(n_max);
        out.coeffs[n_max] = Complex64::new(a0, 0.0);
        for n in 1..=n_max {
            let a = cos.get(n - 1).copied().unwrap_or(0.0);
            let b = sin.get(n - 1).copied().unwrap_or(0.0);
            let c = Complex64::new(a / 2.0, -b / 2.0);
            out.coeffs[n_max + n] = c;
            out.coeffs[n_max - n] = c.conj();
        }
        out
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Same series stored with a larger `n_max`.
    pub fn padded(&self, n_max: usize) -> Self {
        assert!(n_max >= self.n_max, "padding cannot truncate");
        let mut out = Self::zeros(n_max);
        for (n, c) in self.modes() {
            out.set(n, c);
        }
        out
    }

    /// `c_n`, zero outside the stored range.
    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.n_max {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n + self.n_max as i64) as usize]
        }
    }

    pub fn set(&mut self, n: i64, c: Complex64) {
        assert!(n.unsigned_abs() as usize <= self.n_max, "mode {n} out of range");
        self.coeffs[(n + self.n_max as i64) as usize] = c;
    }

    /// Iterator over `(n, c_n)` in increasing `n`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n_max = self.n_max as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - n_max, c))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest `|c_{-n} - conj(c_n)|` over all modes (including `Im c_0`).
    pub fn hermitian_defect(&self) -> f64 {
        (0..=self.n_max as i64)
            .map(|n| (self.get(-n) - self.get(n).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Errors unless the series represents real data.
    pub fn require_hermitian(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(invalid("non-finite Fourier coefficient"));
        }
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let defect = self.hermitian_defect();
        if defect > 1e-12 * scale {
            return Err(invalid(format!(
                "boundary data is not real: Hermitian defect {defect:e}"
            )));
        }
        Ok(())
    }

    /// Coefficients of `θ ↦ f(θ + φ)`.
    pub fn rotated(&self, phi: f64) -> Self {
        let coeffs = self
            .modes()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * phi))
            .collect();
        FourierCoeffs { n_max: self.n_max, coeffs }
    }

    /// Value at angle `θ`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.modes()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .sum()
    }

    /// Value of real data at angle `θ`, `c_0 + 2 Re Σ_{n≥1} c_n e^{inθ}`.
    pub fn eval_real(&self, theta: f64) -> f64 {
        let mut acc = self.get(0).re;
        for n in 1..=self.n_max as i64 {
            acc += 2.0 * (self.get(n) * Complex64::from_polar(1.0, n as f64 * theta)).re;
        }
        acc
    }

    /// Samples of real data at `count` equispaced angles `2πk/count`.
    pub fn real_samples(&self, count: usize) -> Vec<f64> {
        (0..count)
            .map(|k| self.eval_real(2.0 * PI * k as f64 / count as f64))
            .collect()
    }
}

/// Interpolating trigonometric polynomial through `2N+1` equispaced samples.
///
/// If every sample is real the result is Hermitian to exact equality.
pub fn samples_to_coeffs(samples: &[Complex64]) -> Result<FourierCoeffs> {
    let k = samples.len();
    if k < 3 || k % 2 == 0 {
        return Err(invalid(format!(
            "sample count must be odd and at least 3, got {k}"
        )));
    }
    if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
        return Err(invalid("non-finite sample"));
    }
    let n_max = (k - 1) / 2;
    let real = samples.iter().all(|s| s.im == 0.0);
    let coeff = |n: i64| -> Complex64 {
        let acc: Complex64 = samples
            .iter()
            .enumerate()
            .map(|(j, &s)| s * root_of_unity(-n * j as i64, k))
            .sum();
        acc / k as f64
    };
    let mut out = FourierCoeffs::zeros(n_max);
    for n in 0..=n_max as i64 {
        let c = coeff(n);
        out.set(n, c);
        if n > 0 {
            out.set(-n, if real { c.conj() } else { coeff(-n) });
        }
    }
    if real {
        out.set(0, Complex64::new(out.get(0).re, 0.0));
    }
    Ok(out)
}

/// Real-sample convenience wrapper around [`samples_to_coeffs`].
pub fn real_samples_to_coeffs(samples: &[f64]) -> Result<FourierCoeffs> {
    let s: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    samples_to_coeffs(&s)
}

/// `Σ c_n e^{inθ_k}` at `θ_k = 2πk/count`.
pub fn coeffs_to_samples(c: &FourierCoeffs, count: usize) -> Result<Vec<Complex64>> {
    if count < 2 * c.n_max() + 1 {
        return Err(invalid(format!(
            "need at least {} samples for n_max = {}, got {count}",
            2 * c.n_max() + 1,
            c.n_max()
        )));
    }
    if !c.is_finite() {
        return Err(invalid("non-finite Fourier coefficient"));
    }
    Ok((0..count)
        .map(|k| {
            c.modes()
                .map(|(n, cn)| cn * root_of_unity(n * k as i64, count))
                .sum()
        })
        .collect())
}

/// `Σ |c_n|²`, the mean square of the interpolant over the circle.
pub fn parseval_energy(c: &FourierCoeffs) -> f64 {
    c.coeffs.iter().map(|z| z.norm_sqr()).sum()
}

/// Coefficients `a_n`, `0 <= n <= m_max`, of `Σ a_n z^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorCoeffs {
    coeffs: Vec<Complex64>,
}

impl TaylorCoeffs {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a Taylor series needs at least one coefficient");
        TaylorCoeffs { coeffs }
    }

    pub fn zeros(m_max: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); m_max + 1])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn m_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn derivative(&self) -> TaylorCoeffs {
        if self.coeffs.len() == 1 {
            return Self::zeros(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &a)| a * n as f64)
                .collect(),
        )
    }

    /// Primitive vanishing at the origin, one order longer than `self`.
    pub fn primitive(&self) -> TaylorCoeffs {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Complex64::new(0.0, 0.0));
        out.extend(self.coeffs.iter().enumerate().map(|(n, &a)| a / (n + 1) as f64));
        Self::new(out)
    }

    pub fn scale(&self, s: Complex64) -> TaylorCoeffs {
        Self::new(self.coeffs.iter().map(|&a| a * s).collect())
    }

    /// Truncated Cauchy product up to order `m_out`.
    pub fn mul_truncated(&self, other: &TaylorCoeffs, m_out: usize) -> TaylorCoeffs {
        let out = (0..=m_out)
            .map(|n| {
                (0..=n)
                    .filter(|&k| k <= self.m_max() && n - k <= other.m_max())
                    .map(|k| self.coeffs[k] * other.coeffs[n - k])
                    .sum()
            })
            .collect();
        Self::new(out)
    }

    /// `Σ_{n > m_cut} n |a_n|²`.
    pub fn weighted_tail(&self, m_cut: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(m_cut + 1)
            .map(|(n, a)| n as f64 * a.norm_sqr())
            .sum()
    }

    /// Restriction to the unit circle as a Fourier series (negative modes zero).
    pub fn boundary_coeffs(&self) -> FourierCoeffs {
        let mut out = FourierCoeffs::zeros(self.m_max());
        for (n, &a) in self.coeffs.iter().enumerate() {
            out.set(n as i64, a);
        }
        out
    }
}

/// `exp(F)` truncated at order `m_out`, by `n b_n = Σ_{k=1..n} k F_k b_{n-k}`.
pub fn series_exp(f: &TaylorCoeffs, m_out: usize) -> Result<TaylorCoeffs> {
    if !f.is_finite() {
        return Err(invalid("non-finite series coefficient"));
    }
    let f0 = f.get(0);
    let b0 = f0.exp();
    if !b0.re.is_finite() || !b0.im.is_finite() {
        return Err(Error::Range(format!("exp(F_0) overflows for F_0 = {f0}")));
    }
    let mut b = Vec::with_capacity(m_out + 1);
    b.push(b0);
    for n in 1..=m_out {
        let top = n.min(f.m_max());
        let acc: Complex64 = (1..=top).map(|k| f.coeffs[k] * k as f64 * b[n - k]).sum();
        let bn = acc / n as f64;
        if !bn.re.is_finite() || !bn.im.is_finite() {
            return Err(Error::Range(format!("exp series overflows at order {n}")));
        }
        b.push(bn);
    }
    Ok(TaylorCoeffs::new(b))
}

/// Cauchy–Schwarz bound on `sup_{|z|<=ρ} |Σ_{n>m_cut} a_n z^n|`:
/// `(Σ_{n>m_cut} |a_n|²)^{1/2} (Σ_{n>m_cut} ρ^{2n})^{1/2}`.
pub fn tail_bound(a: &TaylorCoeffs, rho: f64, m_cut: usize) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(invalid(format!("radius must lie in (0, 1), got {rho}")));
    }
    if m_cut > a.m_max() {
        return Err(invalid(format!(
            "cut {m_cut} beyond truncation order {}",
            a.m_max()
        )));
    }
    let coeff_mass: f64 = a.coeffs[m_cut + 1..].iter().map(|c| c.norm_sqr()).sum();
    let r2 = rho * rho;
    let geometric = r2.powi(m_cut as i32 + 1) / (1.0 - r2);
    Ok((coeff_mass * geometric).sqrt())
}
