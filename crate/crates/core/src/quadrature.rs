//! Gauss rules and Legendre series on `[-1, 1]`.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of a quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Applies the rule to `f`, summed left to right.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `∫_a^b f`, affinely mapped. Only meaningful for the Legendre rule.
    pub fn integrate_on(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.integrate(|x| f(mid + half * x))
    }
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `n`-point Gauss–Legendre rule, nodes ascending.
pub fn gauss_legendre(n: usize) -> Rule {
    assert!(n >= 1, "a Gauss rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton.
        let nf = n as f64;
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Rule { nodes, weights }
}

/// `n`-point Gauss–Jacobi rule for the weight `(1 + x)^b` on `[-1, 1]`,
/// `b > -1`, by the Golub–Welsch eigenvalue method. Nodes ascending.
pub fn gauss_jacobi_left(n: usize, b: f64) -> Rule {
    assert!(n >= 1, "a Gauss rule needs at least one node");
    assert!(b > -1.0, "Jacobi exponent must exceed -1");
    let a = 0.0;
    let ab = a + b;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    for (k, d) in diag.iter_mut().enumerate() {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        *d = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
    }
    for (k, o) in off.iter_mut().enumerate() {
        let kf = (k + 1) as f64;
        let s = 2.0 * kf + ab;
        let beta = 4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0));
        *o = beta.sqrt();
    }
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jac[(k, k)] = diag[k];
        if k + 1 < n {
            jac[(k, k + 1)] = off[k];
            jac[(k + 1, k)] = off[k];
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mu0 = 2f64.powf(b + 1.0) / (b + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let v0 = eig.eigenvectors[(0, k)];
            (eig.eigenvalues[k], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// `n`-point Gauss–Jacobi rule for `∫_0^R g(ρ) ρ^b dρ`, returned as
/// `(ρ_i, W_i)`.
pub fn radial_jacobi(rule: &Rule, b: f64, radius: f64) -> Vec<(f64, f64)> {
    let scale = (0.5 * radius).powf(b + 1.0);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| (0.5 * radius * (1.0 + x), scale * w))
        .collect()
}

/// Legendre expansion on `[-1, 1]` of functions sampled at the nodes of a
/// Gauss–Legendre rule.
#[derive(Debug, Clone)]
pub struct LegendreTransform {
    n: usize,
    /// Row-major `n × n`: `c_k = Σ_i t[k n + i] f_i`.
    t: Vec<f64>,
}

impl LegendreTransform {
    pub fn new(rule: &Rule) -> Self {
        let n = rule.len();
        let mut t = vec![0.0; n * n];
        for (i, (&x, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let (mut p0, mut p1) = (1.0, x);
            for k in 0..n {
                let pk = if k == 0 {
                    1.0
                } else if k == 1 {
                    x
                } else {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                    p2
                };
                t[k * n + i] = 0.5 * (2.0 * k as f64 + 1.0) * w * pk;
            }
        }
        LegendreTransform { n, t }
    }

    /// Coefficients of the degree `n-1` interpolant of the nodal values.
    pub fn coefficients(&self, values: &[f64]) -> Vec<f64> {
        assert_eq!(values.len(), self.n);
        (0..self.n)
            .map(|k| {
                self.t[k * self.n..(k + 1) * self.n]
                    .iter()
                    .zip(values)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// `Σ c_k P_k(x)` by Clenshaw's recurrence.
pub fn legendre_eval(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for k in (1..c.len()).rev() {
        let kf = k as f64;
        let alpha = (2.0 * kf + 1.0) / (kf + 1.0) * x;
        let beta = (kf + 1.0) / (kf + 2.0);
        let b0 = c[k] + alpha * b1 - beta * b2;
        b2 = b1;
        b1 = b0;
    }
    c.first().copied().unwrap_or(0.0) + x * b1 - 0.5 * b2
}

/// Coefficients of `x ↦ ∫_{-1}^x Σ c_k P_k`, one degree higher.
pub fn legendre_antiderivative(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    let mut out = vec![0.0; n + 1];
    for (k, &ck) in c.iter().enumerate() {
        if k == 0 {
            out[0] += ck;
            out[1] += ck;
        } else {
            let d = ck / (2.0 * k as f64 + 1.0);
            out[k + 1] += d;
            out[k - 1] -= d;
        }
    }
    // Fix the constant so the primitive vanishes at -1.
    let at_minus_one = legendre_eval(&out, -1.0);
    out[0] -= at_minus_one;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn legendre_rule_integrates_monomials_exactly() {
        for n in [1, 2, 5, 16, 64, 128] {
            let rule = gauss_legendre(n);
            assert_abs_diff_eq!(rule.weights.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
            for k in 0..(2 * n).min(40) {
                let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
                assert_abs_diff_eq!(rule.integrate(|x| x.powi(k as i32)), exact, epsilon = 1e-14);
            }
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn jacobi_rule_moments() {
        for &b in &[-0.5, 0.0, 0.3, 1.0, 2.5] {
            let rule = gauss_jacobi_left(12, b);
            // ∫_{-1}^1 (1+x)^{b+k} dx = 2^{b+k+1}/(b+k+1)
            for k in 0..20 {
                let exact = 2f64.powf(b + k as f64 + 1.0) / (b + k as f64 + 1.0);
                let got = rule.integrate(|x| (1.0 + x).powi(k));
                assert!((got - exact).abs() <= 1e-13 * exact, "b={b} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn jacobi_with_zero_exponent_matches_legendre() {
        let j = gauss_jacobi_left(20, 0.0);
        let l = gauss_legendre(20);
        for (a, b) in j.nodes.iter().zip(&l.nodes) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        for (a, b) in j.weights.iter().zip(&l.weights) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn radial_jacobi_handles_power_singularity() {
        // ∫_0^2 ρ^{-0.4} cos ρ dρ, reference by substitution ρ = s^5 with a
        // fine Legendre rule (smooth integrand 5 s^{2} cos s^5).
        let rule = gauss_jacobi_left(24, -0.4);
        let got: f64 = radial_jacobi(&rule, -0.4, 2.0)
            .iter()
            .map(|&(r, w)| w * r.cos())
            .sum();
        let top = 2f64.powf(0.2);
        let reference =
            gauss_legendre(200).integrate_on(0.0, top, |s| 5.0 * s.powi(2) * s.powi(5).cos());
        assert_abs_diff_eq!(got, reference, epsilon = 1e-13);
    }

    #[test]
    fn legendre_series_roundtrip_and_primitive() {
        let rule = gauss_legendre(24);
        let tr = LegendreTransform::new(&rule);
        let f = |x: f64| (2.0 * x).exp() * (x + 0.3).sin();
        let values: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
        let c = tr.coefficients(&values);
        for i in 0..=40 {
            let x = -1.0 + 2.0 * i as f64 / 40.0;
            assert_abs_diff_eq!(legendre_eval(&c, x), f(x), epsilon = 1e-12);
        }
        let prim = legendre_antiderivative(&c);
        assert_abs_diff_eq!(legendre_eval(&prim, -1.0), 0.0, epsilon = 1e-15);
        let direct = gauss_legendre(60).integrate_on(-1.0, 0.4, f);
        assert_abs_diff_eq!(legendre_eval(&prim, 0.4), direct, epsilon = 1e-12);
        // The full primitive reproduces the Gauss sum exactly.
        assert_abs_diff_eq!(legendre_eval(&prim, 1.0), rule.integrate(f), epsilon = 1e-13);
    }
}
