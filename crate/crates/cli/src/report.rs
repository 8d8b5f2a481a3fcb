//! Report documents and their JSON/CSV serialization.

use std::io::Write;
use std::path::Path;

use isoperim::CheckReport;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::runner::Refinement;
use crate::CliError;

pub const TOOLKIT: &str = "isoperim";

/// Fields excluded when two runs are compared for determinism.
pub const NONDETERMINISTIC_FIELDS: [&str; 1] = ["wall_time_s"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub toolkit: String,
    pub version: String,
    pub scenario: Value,
    pub checks: Vec<CheckReport>,
    pub refinement: Vec<Refinement>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl ReportDocument {
    pub fn new(scenario: Value, checks: Vec<CheckReport>, refinement: Vec<Refinement>, wall_time_s: f64) -> Self {
        ReportDocument {
            toolkit: TOOLKIT.into(),
            version: isoperim::VERSION.into(),
            scenario,
            pass: checks.iter().all(|c| c.pass),
            checks,
            refinement,
            wall_time_s,
        }
    }

    /// Pretty JSON with keys sorted at every depth.
    pub fn to_json(&self) -> String {
        let value = sorted(serde_json::to_value(self).expect("report documents serialize"));
        let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
        s.push('\n');
        s
    }

    /// One row per check: `name,lhs,rhs,slack,tolerance,pass`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory csv");
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                fmt_f64(c.lhs),
                fmt_f64(c.rhs),
                fmt_f64(c.slack),
                fmt_f64(c.tolerance),
                c.pass.to_string(),
            ])
            .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

pub const CSV_HEADER: [&str; 6] = ["name", "lhs", "rhs", "slack", "tolerance", "pass"];

/// Shortest round-trip representation.
fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}`, expected json or csv")),
        }
    }
}

/// Writes `text` to `out`; `-` is stdout. Files are replaced atomically
/// through a temporary file in the same directory.
pub fn emit(text: &str, out: &str) -> Result<(), CliError> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(text.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Io(format!("stdout: {e}")));
    }
    let path = Path::new(out);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{out}: {e}"));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Drops the nondeterministic fields so two renderings can be compared
/// byte for byte.
pub fn deterministic_view(json: &str) -> Result<String, serde_json::Error> {
    let mut v: Value = serde_json::from_str(json)?;
    if let Value::Object(map) = &mut v {
        for key in NONDETERMINISTIC_FIELDS {
            map.remove(key);
        }
    }
    serde_json::to_string_pretty(&sorted(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> ReportDocument {
        let checks = vec![
            CheckReport::new("nehari", 1.0, 2.0, 1.0, 1e-8).with("z", 1).with("a", 2),
            CheckReport::new("bol", 3.0, 1e-300, -3.0, 1e-8),
        ];
        ReportDocument::new(serde_json::json!({"spec": 1}), checks, vec![], 0.5)
    }

    #[test]
    fn json_keys_are_sorted_and_round_trip() {
        let d = doc();
        let json = d.to_json();
        let back: ReportDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
        assert!(json.find("\"checks\"").unwrap() < json.find("\"pass\"").unwrap());
        assert!(json.find("\"a\"").unwrap() < json.find("\"z\"").unwrap());
        assert!(!d.pass);
    }

    #[test]
    fn csv_rows_round_trip_floats() {
        let csv = doc().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "name,lhs,rhs,slack,tolerance,pass");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "bol,3.0,1e-300,-3.0,1e-8,false");
    }

    #[test]
    fn deterministic_view_drops_wall_time() {
        let mut a = doc();
        let b = a.clone();
        a.wall_time_s = 9.0;
        assert_ne!(a.to_json(), b.to_json());
        assert_eq!(deterministic_view(&a.to_json()).unwrap(), deterministic_view(&b.to_json()).unwrap());
    }

    #[test]
    fn emit_replaces_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        let p = path.to_str().unwrap();
        emit("first", p).unwrap();
        emit("second", p).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert!(matches!(emit("x", "/nonexistent-dir/r.json"), Err(CliError::Io(_))));
    }
}
