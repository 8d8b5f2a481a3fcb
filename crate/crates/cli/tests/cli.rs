use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use isoperim_cli::ReportDocument;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isoperim"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn check_json(scenario: &Path) -> (i32, ReportDocument) {
    let out = run(&["check", scenario.to_str().unwrap()]);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    (out.status.code().unwrap(), doc)
}

fn write_scenario(dir: &tempfile::TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn nehari_example_has_small_positive_slack() {
    let (code, doc) = check_json(&data("data/nehari_cos.json"));
    assert_eq!(code, 0);
    let c = &doc.checks[0];
    assert_eq!(c.name, "nehari");
    assert!((c.slack - 0.027).abs() < 1e-3, "{c:?}");
    assert!((c.lhs - 44.623).abs() < 0.01 && (c.rhs - 44.650).abs() < 0.01);
}

#[test]
fn bol_example_is_an_equality() {
    let (code, doc) = check_json(&data("data/bol_bubble.json"));
    assert_eq!(code, 0);
    let c = &doc.checks[0];
    assert!((c.lhs - 4.0 * PI * PI).abs() <= 1e-8 * c.rhs);
    assert!((c.lhs - c.rhs).abs() <= 1e-8 * c.rhs);
    assert_eq!(doc.refinement.len(), 1);
    assert!(doc.refinement[0].estimate.unwrap() < 1e-8);
}

#[test]
fn fiala_example_on_the_sphere() {
    let (code, doc) = check_json(&data("data/fiala_sphere.json"));
    assert_eq!(code, 0);
    let c = &doc.checks[0];
    assert_eq!(c.name, "fiala");
    assert_eq!(c.metadata["family"], "bubble");
    assert!(c.metadata["max_equality_residual"].as_f64().unwrap() < 1e-5);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let schema = write_scenario(&dir, r#"{"spec": 1, "check": "bol", "boundary": {"type": "preset", "name": "flat"}}"#);
    let out = run(&["check", schema.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));

    let typo = write_scenario(&dir, r#"{"spec": 1, "check": "nehari", "boundary": {"type": "fourier", "coeffs": [[1, 0.5]]}}"#);
    let out = run(&["check", typo.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("boundary.coeffs[0]"));

    let newer = write_scenario(&dir, r#"{"spec": 7, "check": "nehari"}"#);
    assert_eq!(run(&["check", newer.to_str().unwrap()]).status.code(), Some(2));

    // the hyperbolic metric with scale 1 blows up on the boundary circle
    let pre = write_scenario(
        &dir,
        r#"{"spec": 1, "check": "alexandrov", "K0": 0.0, "boundary": {"type": "preset", "name": "hyperbolic"}}"#,
    );
    assert_eq!(run(&["check", pre.to_str().unwrap()]).status.code(), Some(3));

    let missing = dir.path().join("absent.json");
    assert_eq!(run(&["check", missing.to_str().unwrap()]).status.code(), Some(4));
    let out = run(&["check", data("data/nehari_cos.json").to_str().unwrap(), "--out", "/nonexistent-dir/r.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn violated_inequality_exits_one_and_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    // a two-term Taylor series cannot reproduce exp(u/2)
    let path = write_scenario(
        &dir,
        r#"{"spec": 1, "check": "conformal_residual", "m_max": 2,
            "boundary": {"type": "fourier", "coeffs": [[1, 0.5, 0], [-1, 0.5, 0]]}}"#,
    );
    let out_path = dir.path().join("report.json");
    let out = run(&["check", path.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc: ReportDocument = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(!doc.pass && !doc.checks[0].pass);
}

#[test]
fn empty_check_list_is_rejected_but_empty_reports_are_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(&dir, r#"{"spec": 1, "check": []}"#);
    assert_eq!(run(&["check", path.to_str().unwrap()]).status.code(), Some(2));
    let doc = ReportDocument::new(serde_json::json!({}), vec![], vec![], 0.0);
    let back: ReportDocument = serde_json::from_str(&doc.to_json()).unwrap();
    assert_eq!(back, doc);
    assert!(back.pass);
    assert_eq!(doc.to_csv().lines().count(), 1);
}

#[test]
fn csv_has_one_row_per_check() {
    let out = run(&["check", data("data/mixed.json").to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().next().unwrap(), "name,lhs,rhs,slack,tolerance,pass");
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn golden_csv() {
    let out = run(&["check", data("data/mixed.json").to_str().unwrap(), "--format", "csv"]);
    let got = csv_rows(&String::from_utf8(out.stdout).unwrap());
    let want = csv_rows(&std::fs::read_to_string(data("golden/mixed.csv")).unwrap());
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(&want) {
        assert_eq!(g[0], w[0]);
        assert_eq!(g[5], w[5]);
        for k in 1..5 {
            let (a, b): (f64, f64) = (g[k].parse().unwrap(), w[k].parse().unwrap());
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{} column {k}: {a} vs {b}", g[0]);
        }
    }
}

#[test]
fn json_report_round_trips_and_echoes_the_scenario() {
    let (_, doc) = check_json(&data("data/mixed.json"));
    let text = doc.to_json();
    let back: ReportDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(doc.toolkit, "isoperim");
    assert_eq!(doc.version, isoperim::VERSION);
    assert_eq!(doc.scenario["K0"], 0.5);
    assert_eq!(doc.scenario["grid"]["nlevels"], 32);
    // gauss_bonnet does not depend on the grid
    let names: Vec<&str> = doc.refinement.iter().map(|r| r.check.as_str()).collect();
    assert_eq!(names, ["bol", "alexandrov"]);
}

#[test]
fn command_line_overrides() {
    let path = data("data/bol_bubble.json");
    let (_, doc) = check_json(&path);
    assert_eq!(doc.checks[0].metadata["nr"], 128);
    let out = run(&["check", path.to_str().unwrap(), "--grid-nr", "48", "--grid-ntheta", "96", "--tol", "1e-6"]);
    let doc: ReportDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.checks[0].metadata["nr"], 48);
    assert_eq!(doc.checks[0].metadata["ntheta"], 96);
    assert_eq!(doc.checks[0].tolerance, 1e-6);
    assert_eq!(run(&["check", path.to_str().unwrap(), "--grid-nr", "8"]).status.code(), Some(2));
}

#[test]
fn seeds_select_random_boundaries() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(
        &dir,
        r#"{"spec": 1, "check": "nehari", "boundary": {"type": "random", "n_max": 8, "amplitude": 1.0}}"#,
    );
    let p = path.to_str().unwrap();
    let lhs = |seed: &str| -> f64 {
        let doc: ReportDocument = serde_json::from_slice(&run(&["check", p, "--seed", seed]).stdout).unwrap();
        assert!(doc.pass);
        doc.checks[0].lhs
    };
    assert_eq!(lhs("5"), lhs("5"));
    assert_ne!(lhs("5"), lhs("6"));
}

#[test]
fn presets_are_listed() {
    let out = run(&["presets", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["bubble", "flat", "sphere", "hyperbolic"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}
