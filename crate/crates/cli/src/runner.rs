//! Dispatch from scenario checks to the core checkers.

use std::sync::Arc;

use isoperim::alexandrov::{alexandrov_check_with, CurvatureScenario};
use isoperim::fiala::{fiala_ineq_check_with, gauss_bonnet_check, parallel_flow, Direction, RadialMetric, FIALA_TOL};
use isoperim::fourier::DEFAULT_TAYLOR_ORDER;
use isoperim::geometry::{nehari_check_with, QUADRATURE_TOL};
use isoperim::green::{
    green_level_bound_check, huber_measure_check, huber_point_check, huber_superlevel_check, PointMassMeasure,
    SuperlevelScenario,
};
use isoperim::harmonic::{build_conformal_factor, disk_test_points, poisson_extend, residual_check};
use isoperim::level_sets::{bol_check_with, BoundaryData};
use isoperim::pole::PoleQuadrature;
use isoperim::{CheckReport, Error, FourierCoeffs, PolarGrid, RadialFamily, ScalarField};
use serde::{Deserialize, Serialize};

use crate::scenario::{
    Boundary, CheckKind, PresetName, Scenario, DEFAULT_NLEVELS, DEFAULT_NR, DEFAULT_NTHETA, MIN_NLEVELS, MIN_NR,
    MIN_NTHETA,
};
use crate::CliError;

/// Default tolerance of the level-set bound on the Green function.
pub const GREEN_BOUND_TOL: f64 = 1e-6;

const DEFAULT_P_END: f64 = 0.5;

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub grid_nr: Option<usize>,
    pub grid_ntheta: Option<usize>,
    pub levels: Option<usize>,
    pub tol: Option<f64>,
    pub seed: u64,
}

/// Discretization used for one evaluation of a check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub nr: usize,
    pub ntheta: usize,
    pub nlevels: usize,
    /// Taylor order; `None` picks the checker default.
    pub m_max: Option<usize>,
    pub step: f64,
}

impl Resolution {
    pub fn resolve(sc: &Scenario, opts: &RunOptions) -> Result<Self, CliError> {
        let grid = sc.grid.clone().unwrap_or_default();
        let res = Resolution {
            nr: opts.grid_nr.or(grid.nr).unwrap_or(DEFAULT_NR),
            ntheta: opts.grid_ntheta.or(grid.ntheta).unwrap_or(DEFAULT_NTHETA),
            nlevels: opts.levels.or(grid.nlevels).unwrap_or(DEFAULT_NLEVELS),
            m_max: sc.m_max,
            step: sc.step.unwrap_or(isoperim::fiala::DEFAULT_STEP),
        };
        if res.nr < MIN_NR || res.ntheta < MIN_NTHETA || res.nlevels < MIN_NLEVELS {
            return Err(CliError::Schema(format!(
                "grid: {} x {} with {} levels is below the minimum {MIN_NR} x {MIN_NTHETA} with {MIN_NLEVELS}",
                res.nr, res.ntheta, res.nlevels
            )));
        }
        if let Some(m) = res.m_max {
            if m < 2 {
                return Err(CliError::Schema(format!("m_max: {m} is below the minimum 2")));
            }
        }
        if !(res.step > 0.0 && res.step.is_finite()) {
            return Err(CliError::Schema(format!("step: must be positive, got {}", res.step)));
        }
        Ok(res)
    }

    /// Half the grid and Taylor order. Levels and the flow step fix where
    /// samples are taken, so they stay put.
    pub fn halved(&self) -> Self {
        Resolution {
            nr: self.nr / 2,
            ntheta: self.ntheta / 2,
            m_max: Some((self.m_max.unwrap_or(DEFAULT_TAYLOR_ORDER) / 2).max(2)),
            ..*self
        }
    }
}

/// Difference between a check at full and at half resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub check: String,
    pub lhs: f64,
    pub lhs_half: Option<f64>,
    pub rhs: f64,
    pub rhs_half: Option<f64>,
    pub slack: f64,
    pub slack_half: Option<f64>,
    /// `|Δslack|`. Sampled checks report `lhs`/`rhs` at their worst sample,
    /// which may move between resolutions; the slack does not.
    pub estimate: Option<f64>,
    /// Why the half-resolution run produced no numbers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Refinement {
    fn between(full: &CheckReport, half: Result<CheckReport, Error>) -> Self {
        let mut r = Refinement {
            check: full.name.clone(),
            lhs: full.lhs,
            lhs_half: None,
            rhs: full.rhs,
            rhs_half: None,
            slack: full.slack,
            slack_half: None,
            estimate: None,
            error: None,
        };
        match half {
            Ok(h) => {
                r.lhs_half = Some(h.lhs);
                r.rhs_half = Some(h.rhs);
                r.slack_half = Some(h.slack);
                r.estimate = Some((full.slack - h.slack).abs());
            }
            Err(e) => r.error = Some(e.to_string()),
        }
        r
    }
}

/// Whether a check's numbers depend on the grid or the Taylor order.
pub fn is_quadrature_based(kind: CheckKind) -> bool {
    !matches!(kind, CheckKind::GaussBonnet | CheckKind::ConformalResidual | CheckKind::Fiala)
}

fn default_tolerance(kind: CheckKind) -> f64 {
    match kind {
        CheckKind::Fiala => FIALA_TOL,
        CheckKind::GreenBound => GREEN_BOUND_TOL,
        _ => QUADRATURE_TOL,
    }
}

/// Runs one check; `None` tolerance uses the check's default.
pub fn run_check(
    kind: CheckKind,
    sc: &Scenario,
    res: &Resolution,
    tol: Option<f64>,
    seed: u64,
) -> Result<CheckReport, Error> {
    let tol = tol.unwrap_or_else(|| default_tolerance(kind));
    let grid = || PolarGrid::new(res.nr, res.ntheta);
    let quad = || PoleQuadrature::new(res.ntheta, res.nr);
    let u = sc.boundary_coeffs(seed);
    let family = sc.family();
    let missing = |what: &str| Error::InvalidInput(format!("check `{}` needs {what}", kind.name()));
    let mut report = match kind {
        CheckKind::Nehari => {
            let m = res.m_max.unwrap_or(DEFAULT_TAYLOR_ORDER).max(2 * u.n_max());
            nehari_check_with(&u, m, tol)?
        }
        CheckKind::ConformalResidual => {
            let m = res.m_max.unwrap_or(DEFAULT_TAYLOR_ORDER).max(2 * u.n_max());
            let cf = build_conformal_factor(&u, m)?;
            let points = disk_test_points(res.nr, res.ntheta);
            let residual = residual_check(&cf, &u, &points)?;
            CheckReport::new("conformal_residual", residual, 0.0, -residual, tol)
                .with("m_max", m)
                .with("min_derivative_modulus", cf.min_derivative_modulus(&points))
                .with("n_max", u.n_max())
                .with("points", points.len())
        }
        CheckKind::Bol => {
            let lambda = sc.lambda.ok_or_else(|| missing("lambda"))?;
            let g = grid()?;
            let (field, boundary) = u_field(sc, &u, family, &g)?;
            bol_check_with(&field, &boundary, lambda, tol)?
        }
        CheckKind::HuberPoint => {
            let alpha = sc.alpha.ok_or_else(|| missing("alpha"))?;
            let y = sc.pole_point().ok_or_else(|| missing("pole"))?;
            huber_point_check(&u, alpha, y, &quad()?)?
        }
        CheckKind::HuberMeasure => {
            let m = sc.measure.as_ref().ok_or_else(|| missing("measure"))?.to_measure();
            huber_measure_check(&u, &m, &quad()?)?
        }
        CheckKind::HuberSuperlevel => {
            let measure = sc.measure.as_ref().map(|m| m.to_measure()).unwrap_or_else(PointMassMeasure::empty);
            let scenario = match (sc.radius, sc.level, &sc.boundary) {
                (Some(radius), _, _) => {
                    if u.n_max() > 0 && u.modes().any(|(n, c)| n != 0 && c.norm() != 0.0) {
                        return Err(Error::Unsupported("an explicit radius needs constant boundary data".into()));
                    }
                    SuperlevelScenario {
                        h: u.get(0).re,
                        measure,
                        radius,
                        level: None,
                    }
                }
                (None, Some(level), Some(Boundary::Preset { name: PresetName::Bubble, beta, .. })) => {
                    SuperlevelScenario::from_bubble(beta.unwrap_or(1.0), measure, level)?
                }
                _ => return Err(missing("a bubble preset with `level`, or `radius`")),
            };
            huber_superlevel_check(&scenario, res.nr)?
        }
        CheckKind::Alexandrov => {
            let k0 = sc.k0.ok_or_else(|| missing("K0"))?;
            let family = family.ok_or_else(|| missing("a preset radial metric"))?;
            let cs = CurvatureScenario::new(family, &grid()?, k0)?;
            alexandrov_check_with(&cs, res.nlevels, tol)?
        }
        CheckKind::GreenBound => {
            let y = sc.pole_point().ok_or_else(|| missing("pole"))?;
            green_level_bound_check(y, &u, res.nlevels, &quad()?)?
        }
        CheckKind::Fiala => {
            let family = family.ok_or_else(|| missing("a preset radial metric"))?;
            let r0 = sc.r0.ok_or_else(|| missing("r0"))?;
            let direction = sc.direction.unwrap_or(Direction::Outward);
            let trace = parallel_flow(
                &RadialMetric::new(family),
                r0,
                sc.p_end.unwrap_or(DEFAULT_P_END),
                res.step,
                direction,
            )?;
            fiala_ineq_check_with(&trace, tol)?
        }
        CheckKind::GaussBonnet => {
            let family = family.ok_or_else(|| missing("a preset radial metric"))?;
            let r0 = sc.r0.ok_or_else(|| missing("r0"))?;
            gauss_bonnet_check(&RadialMetric::new(family), r0)?
        }
    };
    if report.tolerance != tol {
        report.tolerance = tol;
        report.pass = report.slack >= -tol;
    }
    Ok(report)
}

/// Grid values of `u` and its boundary data: the radial profile for a
/// preset, the harmonic extension otherwise.
fn u_field(
    sc: &Scenario,
    u: &FourierCoeffs,
    family: Option<RadialFamily>,
    grid: &Arc<PolarGrid>,
) -> Result<(ScalarField, BoundaryData), Error> {
    match (family, &sc.boundary) {
        (Some(f), _) => {
            if !(f.r_max() > 1.0) {
                return Err(Error::InvalidInput(format!(
                    "{} metric is not defined on the closed unit disk",
                    f.name()
                )));
            }
            Ok((ScalarField::from_fn(grid, |r, _| f.value(r)), BoundaryData::Constant(f.value(1.0))))
        }
        _ => {
            let h = poisson_extend(u)?;
            Ok((ScalarField::from_fn(grid, |r, t| h.eval(r, t)), BoundaryData::Fourier(u.clone())))
        }
    }
}

/// Checks of a scenario with refinement estimates for the
/// discretization-dependent ones.
pub fn run_checks(
    sc: &Scenario,
    opts: &RunOptions,
) -> Result<(Vec<CheckReport>, Vec<Refinement>), CliError> {
    sc.validate()?;
    let res = Resolution::resolve(sc, opts)?;
    let tol = opts.tol.or(sc.tolerance);
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Schema(format!("tolerance: must be positive, got {t}")));
        }
    }
    let mut checks = Vec::new();
    let mut refinements = Vec::new();
    for kind in sc.check.kinds() {
        let full = run_check(kind, sc, &res, tol, opts.seed).map_err(CliError::Precondition)?;
        if is_quadrature_based(kind) {
            let half = run_check(kind, sc, &res.halved(), tol, opts.seed);
            refinements.push(Refinement::between(&full, half));
        }
        checks.push(full);
    }
    Ok((checks, refinements))
}
