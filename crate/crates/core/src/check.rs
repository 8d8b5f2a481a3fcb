use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Outcome of one inequality check.
///
/// `slack` is oriented so that a non-negative value means the inequality
/// holds; each checker documents which side is subtracted from which.
/// `pass` is always `slack >= -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Sorted key/value pairs (grid sizes, truncations, parameter echo).
    pub metadata: Map<String, Value>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            lhs,
            rhs,
            slack,
            tolerance,
            pass: slack >= -tolerance,
            metadata: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_string(), value.into());
    }
}

/// Finite floats become JSON numbers; anything else is recorded as a string
/// so the report stays valid JSON.
pub(crate) fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{x}")))
}

pub(crate) fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}
