//! Finite-difference derivatives on non-uniform samples.

/// Weights `w` with `f'(x0) ≈ Σ w_i f(xs_i)` (Fornberg's recursion).
pub fn first_derivative_weights(x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let m = 1;
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

/// Centered derivative of `ys(xs)` at sample `k`: five points when both
/// neighbours exist, three near the ends, `None` at the ends themselves.
pub fn centered_derivative(xs: &[f64], ys: &[f64], k: usize) -> Option<f64> {
    let n = xs.len();
    let half = if k >= 2 && k + 2 < n {
        2
    } else if k >= 1 && k + 1 < n {
        1
    } else {
        return None;
    };
    let idx = k - half..=k + half;
    let w = first_derivative_weights(xs[k], &xs[idx.clone()]);
    Some(idx.zip(w).map(|(i, w)| w * ys[i]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_for_quartics_on_uneven_samples() {
        let xs = [0.0, 0.13, 0.3, 0.42, 0.61];
        let f = |x: f64| 1.0 - 2.0 * x + 3.0 * x * x - x.powi(3) + 0.5 * x.powi(4);
        let df = |x: f64| -2.0 + 6.0 * x - 3.0 * x * x + 2.0 * x.powi(3);
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        assert_abs_diff_eq!(centered_derivative(&xs, &ys, 2).unwrap(), df(0.3), epsilon = 1e-12);
        // Three-point stencil is exact for quadratics.
        let q: Vec<f64> = xs.iter().map(|&x| x * x).collect();
        assert_abs_diff_eq!(centered_derivative(&xs, &q, 1).unwrap(), 0.26, epsilon = 1e-13);
        assert!(centered_derivative(&xs, &ys, 0).is_none());
        assert!(centered_derivative(&xs, &ys, 4).is_none());
    }
}
