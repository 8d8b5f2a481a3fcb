//! Geodesic parallels of concentric circles for radial metrics
//! `e^{u(r)}|dz|²`, Gauss–Bonnet, and the differentiated length inequality
//! `dL/dp ≤ 2π - ∫_{F_p} K` (outward; reversed inward).

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::check::{num, nums, CheckReport};
use crate::error::{invalid, Result};
use crate::fd::centered_derivative;
use crate::geometry::QUADRATURE_TOL;
use crate::quadrature::{gauss_legendre, Rule};
use crate::radial::RadialFamily;

/// Default RK4 step in geodesic distance.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Relative tolerance of the finite-difference length inequality.
pub const FIALA_TOL: f64 = 1e-6;

const PANELS: usize = 16;
const PANEL_NODES: usize = 16;

/// A radial metric on `r < r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMetric {
    pub family: RadialFamily,
}

impl RadialMetric {
    pub fn new(family: RadialFamily) -> Self {
        RadialMetric { family }
    }

    pub fn r_max(&self) -> f64 {
        self.family.r_max()
    }

    /// Length of the circle of radius `r`: `2π r e^{u/2}`.
    pub fn circle_length(&self, r: f64) -> f64 {
        TAU * r * (0.5 * self.family.value(r)).exp()
    }

    /// Geodesic curvature of the circle of radius `r`, `e^{-u/2}(1/r + u'/2)`.
    pub fn geodesic_curvature(&self, r: f64) -> f64 {
        (-0.5 * self.family.value(r)).exp() * (1.0 / r + 0.5 * self.family.d1(r))
    }

    /// `∫_a^b 2π f(s) e^{u(s)} s ds` by composite Gauss–Legendre.
    fn radial_integral(&self, rule: &Rule, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let panels = if (b - a).abs() > 0.05 { PANELS } else { 1 };
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + h * k as f64;
                rule.integrate_on(lo, lo + h, |s| TAU * f(s) * self.family.value(s).exp() * s)
            })
            .sum()
    }

    /// Area of the disk `{r < b}` and of an annulus in general.
    pub fn area_between(&self, a: f64, b: f64) -> f64 {
        self.radial_integral(&gauss_legendre(PANEL_NODES), a, b, |_| 1.0)
    }

    /// `∫ K dA` over `a < r < b`.
    pub fn curvature_between(&self, a: f64, b: f64) -> f64 {
        let fam = self.family;
        self.radial_integral(&gauss_legendre(PANEL_NODES), a, b, |s| fam.curvature(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Outward,
    Inward,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Outward => 1.0,
            Direction::Inward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TraceStatus {
    Complete,
    /// The parallel shrank to the center just after distance `p`.
    Collapsed { p: f64 },
    /// The next step would leave the metric's domain.
    ExitedDomain { p: f64 },
}

/// One parallel at geodesic distance `p` from the starting circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub p: f64,
    pub r: f64,
    pub length: f64,
    /// Area of `F_p = {|x| < r}`.
    pub area: f64,
    /// `∫_{F_p} K dA`.
    pub total_curvature: f64,
}

/// Parallels of the circle `r = r0`, ordered by increasing distance `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParallelTrace {
    pub metric: RadialMetric,
    pub direction: Direction,
    pub step: f64,
    pub samples: Vec<TraceSample>,
    pub status: TraceStatus,
}

impl ParallelTrace {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Integrates `dr/dp = ±e^{-u(r)/2}` from `r0` with classical RK4 until
/// distance `p_end`, collapse, or exit from the domain.
pub fn parallel_flow(
    m: &RadialMetric,
    r0: f64,
    p_end: f64,
    step: f64,
    direction: Direction,
) -> Result<ParallelTrace> {
    if !(r0 > 0.0 && r0 < m.r_max()) {
        return Err(invalid(format!("starting radius {r0} outside (0, {})", m.r_max())));
    }
    if !(step > 0.0 && p_end > 0.0 && step.is_finite() && p_end.is_finite()) {
        return Err(invalid("distance and step must be positive"));
    }
    let steps = (p_end / step).round().max(1.0) as usize;
    let h = p_end / steps as f64;
    let sign = direction.sign();
    let speed = |r: f64| sign * (-0.5 * m.family.value(r)).exp();
    let inside = |r: f64| r > 0.0 && r < m.r_max();
    let rule = gauss_legendre(PANEL_NODES);

    let area0 = m.radial_integral(&rule, 0.0, r0, |_| 1.0);
    let fam = m.family;
    let curv0 = m.radial_integral(&rule, 0.0, r0, |s| fam.curvature(s));
    let mut samples = vec![TraceSample {
        p: 0.0,
        r: r0,
        length: m.circle_length(r0),
        area: area0,
        total_curvature: curv0,
    }];
    let mut status = TraceStatus::Complete;
    let mut r = r0;
    let (mut area, mut curv) = (area0, curv0);
    for k in 1..=steps {
        let p_prev = h * (k - 1) as f64;
        let k1 = speed(r);
        let r2 = r + 0.5 * h * k1;
        let k2 = if inside(r2) { speed(r2) } else { f64::NAN };
        let r3 = r + 0.5 * h * k2;
        let k3 = if inside(r3) { speed(r3) } else { f64::NAN };
        let r4 = r + h * k3;
        let k4 = if inside(r4) { speed(r4) } else { f64::NAN };
        let next = r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(next.is_finite() && inside(next)) {
            status = if sign < 0.0 {
                TraceStatus::Collapsed { p: p_prev }
            } else {
                TraceStatus::ExitedDomain { p: p_prev }
            };
            break;
        }
        area += m.radial_integral(&rule, r, next, |_| 1.0);
        curv += m.radial_integral(&rule, r, next, |s| fam.curvature(s));
        r = next;
        samples.push(TraceSample {
            p: h * k as f64,
            r,
            length: m.circle_length(r),
            area,
            total_curvature: curv,
        });
    }
    Ok(ParallelTrace {
        metric: *m,
        direction,
        step: h,
        samples,
        status,
    })
}

/// `lhs = k_g·L(C) + ∫_F K`, `rhs = 2π` for the circle `r = r0`.
pub fn gauss_bonnet_check(m: &RadialMetric, r0: f64) -> Result<CheckReport> {
    if !(r0 > 0.0 && r0 < m.r_max()) {
        return Err(invalid(format!("radius {r0} outside (0, {})", m.r_max())));
    }
    let kg = m.geodesic_curvature(r0);
    let length = m.circle_length(r0);
    let curv = m.curvature_between(0.0, r0);
    let lhs = kg * length + curv;
    Ok(CheckReport::new("gauss_bonnet", lhs, TAU, -(lhs - TAU).abs(), QUADRATURE_TOL)
        .with("family", m.family.name())
        .with("geodesic_curvature", num(kg))
        .with("length", num(length))
        .with("r0", num(r0))
        .with("total_curvature", num(curv)))
}

/// Finite-difference check of `dL/dp ≤ 2π - ∫_{F_p}K` outward and
/// `dL/dp ≥ 2π - ∫_{F_p}K` inward, with `p` signed by the direction.
///
/// Per-sample slacks are divided by `1 + |dL/dp|`; `slack` is the smallest.
/// `max_equality_residual` reports the largest normalized
/// `|dL/dp - (2π - ∫K)|`, which vanishes for radial metrics.
pub fn fiala_ineq_check(trace: &ParallelTrace) -> Result<CheckReport> {
    fiala_ineq_check_with(trace, FIALA_TOL)
}

pub fn fiala_ineq_check_with(trace: &ParallelTrace, tol: f64) -> Result<CheckReport> {
    if trace.len() < 5 {
        return Err(invalid(format!("trace has {} samples, need at least 5", trace.len())));
    }
    let sign = trace.direction.sign();
    let ps: Vec<f64> = trace.samples.iter().map(|s| sign * s.p).collect();
    let ls: Vec<f64> = trace.samples.iter().map(|s| s.length).collect();
    let mut worst: Option<(f64, f64, f64)> = None;
    let mut max_residual = 0.0f64;
    let mut slacks = Vec::new();
    for k in 2..trace.len() - 2 {
        let Some(dl) = centered_derivative(&ps, &ls, k) else { continue };
        let budget = TAU - trace.samples[k].total_curvature;
        let scale = 1.0 + dl.abs();
        let slack = sign * (budget - dl) / scale;
        max_residual = max_residual.max((dl - budget).abs() / scale);
        slacks.push(slack);
        if worst.map_or(true, |w| slack < w.2) {
            worst = Some((dl, budget, slack));
        }
    }
    let Some((dl, budget, slack)) = worst else {
        return Err(invalid("trace has no interior samples"));
    };
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let mut report = CheckReport::new("fiala", dl, budget, slack, tol)
        .with("direction", if sign > 0.0 { "outward" } else { "inward" })
        .with("family", trace.metric.family.name())
        .with("max_equality_residual", num(max_residual))
        .with("min_slack", num(min_slack))
        .with("samples", slacks.len())
        .with("step", num(trace.step));
    match trace.status {
        TraceStatus::Complete => report.insert("status", "complete"),
        TraceStatus::Collapsed { p } => {
            report.insert("status", "collapsed");
            report.insert("status_p", num(p));
        }
        TraceStatus::ExitedDomain { p } => {
            report.insert("status", "exited_domain");
            report.insert("status_p", num(p));
        }
    }
    report.insert(
        "end",
        nums(&[trace.samples[trace.len() - 1].p, trace.samples[trace.len() - 1].r]),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn sphere() -> RadialMetric {
        RadialMetric::new(RadialFamily::sphere())
    }

    #[test]
    fn euclidean_parallels() {
        let flat = RadialMetric::new(RadialFamily::Flat);
        let t = parallel_flow(&flat, 1.0, 0.5, DEFAULT_STEP, Direction::Outward).unwrap();
        assert_eq!(t.len(), 501);
        for s in &t.samples {
            assert_abs_diff_eq!(s.r, 1.0 + s.p, epsilon = 1e-12);
            assert_abs_diff_eq!(s.length, TAU * (1.0 + s.p), epsilon = 1e-11);
            assert_abs_diff_eq!(s.area, PI * s.r * s.r, epsilon = 1e-11);
        }
        let t = parallel_flow(&flat, 1.0, 2.0, DEFAULT_STEP, Direction::Inward).unwrap();
        let TraceStatus::Collapsed { p } = t.status else { panic!("{:?}", t.status) };
        assert!((p - 1.0).abs() <= 2.0 * DEFAULT_STEP);
        for s in &t.samples {
            assert_abs_diff_eq!(s.length, TAU * (1.0 - s.p), epsilon = 1e-11);
        }
        assert!(t.samples.windows(2).all(|w| w[1].r < w[0].r && w[1].p > w[0].p));
    }

    #[test]
    fn sphere_from_equator() {
        let t = parallel_flow(&sphere(), 1.0, 1.2, DEFAULT_STEP, Direction::Outward).unwrap();
        for s in &t.samples {
            assert_abs_diff_eq!(s.r, (0.5 * s.p + FRAC_PI_4).tan(), epsilon = 1e-11);
            assert_abs_diff_eq!(s.length, TAU * s.p.cos(), epsilon = 1e-10);
            assert_abs_diff_eq!(s.total_curvature, TAU * (1.0 + s.p.sin()), epsilon = 1e-10);
        }
        let r = fiala_ineq_check(&t).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.metadata["max_equality_residual"].as_f64().unwrap() < 1e-8);
    }

    #[test]
    fn gauss_bonnet_families() {
        let cases = [
            (RadialFamily::Flat, 1.0, 0.0),
            (RadialFamily::sphere(), 1.0, TAU),
            (RadialFamily::Hyperbolic { scale: 1.0 }, 0.5, f64::NAN),
        ];
        for (fam, r0, curv) in cases {
            let r = gauss_bonnet_check(&RadialMetric::new(fam), r0).unwrap();
            assert!(r.pass && (r.lhs - TAU).abs() < 1e-10, "{r:?}");
            if curv.is_finite() {
                assert_abs_diff_eq!(r.metadata["total_curvature"].as_f64().unwrap(), curv, epsilon = 1e-11);
            }
        }
        // equator is a geodesic
        assert_abs_diff_eq!(sphere().geodesic_curvature(1.0), 0.0, epsilon = 1e-15);
        // hyperbolic disk of radius 1/2: ∫K = -area = -4π r²/(1-r²)
        let hyp = RadialMetric::new(RadialFamily::Hyperbolic { scale: 1.0 });
        assert_abs_diff_eq!(hyp.curvature_between(0.0, 0.5), -4.0 * PI * 0.25 / 0.75, epsilon = 1e-12);
        assert!(gauss_bonnet_check(&hyp, 1.0).is_err());
    }

    #[test]
    fn backbone_equality_on_all_families() {
        let cases = [
            (RadialFamily::Flat, 1.0, Direction::Outward),
            (RadialFamily::Flat, 1.0, Direction::Inward),
            (RadialFamily::sphere(), 1.0, Direction::Inward),
            (RadialFamily::Bubble { beta: 2.0 }, 0.3, Direction::Outward),
            (RadialFamily::Hyperbolic { scale: 1.0 }, 0.5, Direction::Outward),
            (RadialFamily::Hyperbolic { scale: 1.0 }, 0.5, Direction::Inward),
        ];
        for (fam, r0, dir) in cases {
            let t = parallel_flow(&RadialMetric::new(fam), r0, 0.4, DEFAULT_STEP, dir).unwrap();
            assert!(t.len() > 100);
            let r = fiala_ineq_check(&t).unwrap();
            assert!(r.pass, "{fam:?} {dir:?}: {r:?}");
            assert!(r.metadata["max_equality_residual"].as_f64().unwrap() < 1e-5);
        }
    }

    #[test]
    fn hyperbolic_length_grows_faster_than_flat() {
        let hyp = RadialMetric::new(RadialFamily::Hyperbolic { scale: 1.0 });
        let t = parallel_flow(&hyp, 0.5, 0.5, DEFAULT_STEP, Direction::Outward).unwrap();
        assert!(t.samples.iter().all(|s| TAU - s.total_curvature > TAU));
        assert_eq!(t.status, TraceStatus::Complete);
        assert!(t.samples.windows(2).all(|w| w[1].r > w[0].r));
    }

    #[test]
    fn exit_and_collapse_are_flagged() {
        // the equator's outward parallels reach the north pole (r = ∞) at p = π/2
        let t = parallel_flow(&sphere(), 1.0, 2.0, DEFAULT_STEP, Direction::Outward).unwrap();
        let TraceStatus::ExitedDomain { p } = t.status else { panic!("{:?}", t.status) };
        assert!((p - PI / 2.0).abs() < 0.01);
        let t = parallel_flow(&sphere(), 1.0, 3.0, 0.01, Direction::Inward).unwrap();
        let TraceStatus::Collapsed { p } = t.status else { panic!("{:?}", t.status) };
        assert!((p - PI / 2.0).abs() < 0.02);
        let hyp = RadialMetric::new(RadialFamily::Hyperbolic { scale: 0.5 });
        assert!(parallel_flow(&hyp, 2.5, 1.0, DEFAULT_STEP, Direction::Outward).is_err());
        assert!(parallel_flow(&sphere(), 1.0, 0.0, DEFAULT_STEP, Direction::Outward).is_err());
    }
}
