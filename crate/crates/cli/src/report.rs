//! The JSON report every command emits.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
struct Check {
    passed: bool,
    detail: Value,
}

/// Checks are keyed by name and written sorted; timings live under their own key.
#[derive(Debug)]
pub struct Report {
    command: String,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    checks: BTreeMap<String, Check>,
    timings: BTreeMap<String, f64>,
    started: Instant,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            checks: BTreeMap::new(),
            timings: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    pub fn input(&mut self, key: &str, value: Value) {
        self.inputs.insert(key.to_string(), value);
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.checks.insert(name.into(), Check { passed, detail });
    }

    /// Runs `f` and records its wall time in milliseconds under `name`.
    pub fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.insert(name.to_string(), t.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, c)| !c.passed).map(|(n, _)| n.as_str()).collect()
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|(name, c)| {
                json!({
                    "name": name,
                    "outcome": if c.passed { "pass" } else { "fail" },
                    "detail": c.detail,
                })
            })
            .collect();
        let mut timings: Map<String, Value> = self.timings.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        timings.insert("total_ms".into(), json!(self.started.elapsed().as_secs_f64() * 1e3));
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": checks,
            "outcome": if self.passed() { "pass" } else { "fail" },
            "timings": timings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_are_sorted_and_outcome_follows_them() {
        let mut r = Report::new("demo");
        r.check("b", true, json!(null));
        r.check("a", false, json!({"why": 1}));
        let doc = r.to_json();
        let names: Vec<&str> = doc["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
        assert_eq!(names, ["a", "b"]);
        assert_eq!(doc["outcome"], "fail");
        assert_eq!(r.failed_checks(), ["a"]);
        assert!(doc["timings"]["total_ms"].is_number());
    }

    #[test]
    fn empty_report_passes() {
        assert_eq!(Report::new("demo").to_json()["outcome"], "pass");
    }
}
