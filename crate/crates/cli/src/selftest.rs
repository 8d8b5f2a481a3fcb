//! Built-in suite of equality anchors and strict cases.

use std::time::Instant;

use isoperim::level_sets::{build_bubble_field, diff_ineq_check, distribution, H_of_a, P_profile};
use isoperim::{CheckReport, PolarGrid, ScalarField};
use serde_json::{json, Value};

use crate::report::ReportDocument;
use crate::runner::{run_checks, Refinement, RunOptions};
use crate::CliError;

/// Labelled scenarios of the suite, in run order.
pub fn cases() -> Vec<(&'static str, Value)> {
    let cos = json!({"type": "fourier", "coeffs": [[1, 0.5, 0.0], [-1, 0.5, 0.0]]});
    let bubble = |beta: f64| json!({"type": "preset", "name": "bubble", "beta": beta});
    let preset = |name: &str| json!({"type": "preset", "name": name});
    vec![
        (
            "conformal residual of cos θ",
            json!({"spec": 1, "check": "conformal_residual", "tolerance": 1e-10, "m_max": 64,
                   "boundary": {"type": "fourier", "coeffs": [[1, 0.5, 0.0], [-1, 0.5, 0.0], [16, 0.0, 0.0], [-16, 0.0, 0.0]]},
                   "grid": {"nr": 32, "ntheta": 64}}),
        ),
        ("nehari for cos θ", json!({"spec": 1, "check": "nehari", "boundary": cos})),
        (
            "nehari equality for constant data",
            json!({"spec": 1, "check": "nehari", "tolerance": 1e-10, "boundary": {"type": "fourier", "coeffs": [[0, 0.3, 0.0]]}}),
        ),
        (
            "nehari for seeded random data",
            json!({"spec": 1, "check": "nehari", "boundary": {"type": "random", "n_max": 8, "amplitude": 1.0}}),
        ),
        ("bol equality, beta 0.5", json!({"spec": 1, "check": "bol", "lambda": 2.0, "boundary": bubble(0.5)})),
        ("bol equality, beta 1", json!({"spec": 1, "check": "bol", "lambda": 2.0, "boundary": bubble(1.0)})),
        ("bol equality, beta 2", json!({"spec": 1, "check": "bol", "lambda": 2.0, "boundary": bubble(2.0)})),
        (
            "huber equality at the center",
            json!({"spec": 1, "check": "huber_point", "alpha": std::f64::consts::PI, "pole": [0.0, 0.0]}),
        ),
        (
            "huber off-center cone",
            json!({"spec": 1, "check": "huber_point", "alpha": 2.0, "pole": [0.5, 0.1], "boundary": cos}),
        ),
        (
            "huber signed measure",
            json!({"spec": 1, "check": "huber_measure", "boundary": cos,
                   "measure": {"alpha0": 0.2, "atoms": [
                       {"mass": 1.0, "at": [0.3, 0.0]},
                       {"mass": 0.5, "at": [-0.2, 0.1], "sign": "negative"}]}}),
        ),
        (
            "huber on a bubble superlevel disk",
            json!({"spec": 1, "check": "huber_superlevel", "boundary": bubble(1.0), "level": 0.5,
                   "measure": {"atoms": [{"mass": 1.0, "at": [0.0, 0.0]}]}}),
        ),
        ("green bound equality at the center", json!({"spec": 1, "check": "green_bound", "pole": [0.0, 0.0]})),
        ("green bound off center", json!({"spec": 1, "check": "green_bound", "pole": [0.5, 0.0]})),
        ("alexandrov equality, K0 = 1", json!({"spec": 1, "check": "alexandrov", "K0": 1.0, "boundary": preset("sphere")})),
        ("alexandrov strict, K0 = 1/2", json!({"spec": 1, "check": "alexandrov", "K0": 0.5, "boundary": preset("sphere")})),
        (
            "fiala on the sphere",
            json!({"spec": 1, "check": ["fiala", "gauss_bonnet"], "boundary": preset("sphere"), "r0": 1.0, "p_end": 0.5}),
        ),
        (
            "fiala on the sphere, inward",
            json!({"spec": 1, "check": "fiala", "boundary": preset("sphere"), "r0": 1.0, "p_end": 0.5, "direction": "inward"}),
        ),
        (
            "fiala on the plane",
            json!({"spec": 1, "check": ["fiala", "gauss_bonnet"], "boundary": preset("flat"), "r0": 0.5, "p_end": 0.5}),
        ),
        (
            "fiala on the hyperbolic plane",
            json!({"spec": 1, "check": ["fiala", "gauss_bonnet"], "boundary": preset("hyperbolic"), "r0": 0.5, "p_end": 0.3}),
        ),
    ]
}

/// Differential inequality and monotonicity of `P` for the unit bubble.
pub fn level_set_backbone(nr: usize, ntheta: usize, nlevels: usize) -> Result<Vec<CheckReport>, isoperim::Error> {
    let grid = PolarGrid::new(nr, ntheta)?;
    let (u, v, h) = build_bubble_field(1.0, &grid)?;
    let profile = distribution(&v, &ScalarField::constant(&grid, h.exp()), nlevels)?;
    let hs = H_of_a(&u, &v, 2.0, &profile)?;
    Ok(vec![diff_ineq_check(&profile, &hs), P_profile(&profile, &hs).report])
}

/// Runs the whole suite; the document is identical across runs apart
/// from `wall_time_s`.
pub fn run(seed: u64) -> Result<ReportDocument, CliError> {
    let start = Instant::now();
    let opts = RunOptions { seed, ..RunOptions::default() };
    let mut checks = Vec::new();
    let mut refinement: Vec<Refinement> = Vec::new();
    let mut labels = Vec::new();
    for (label, value) in cases() {
        let sc = crate::scenario::Scenario::parse(&value.to_string())?;
        let (c, r) = run_checks(&sc, &opts)?;
        labels.push(json!({"label": label, "checks": c.len()}));
        checks.extend(c);
        refinement.extend(r);
    }
    let backbone = level_set_backbone(128, 256, 64).map_err(CliError::Precondition)?;
    labels.push(json!({"label": "level-set backbone of the unit bubble", "checks": backbone.len()}));
    checks.extend(backbone);
    let scenario = json!({"selftest": {"seed": seed, "cases": labels}});
    Ok(ReportDocument::new(scenario, checks, refinement, start.elapsed().as_secs_f64()))
}
