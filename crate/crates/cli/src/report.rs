//! Suite reports and their JSON / CSV encodings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Which side of the tolerance a residual must fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// residual <= tolerance
    AtMost,
    /// residual >= tolerance
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// `null` in JSON when the computation failed.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
    pub note: String,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64, bound: Bound, note: impl Into<String>) -> Self {
        let passed = match bound {
            Bound::AtMost => residual <= tolerance,
            Bound::AtLeast => residual >= tolerance,
        };
        let residual = residual.is_finite().then_some(residual);
        Self { name: name.into(), passed: passed && residual.is_some(), residual, tolerance, bound, note: note.into() }
    }

    pub fn at_most(name: impl Into<String>, residual: f64, tolerance: f64, note: impl Into<String>) -> Self {
        Self::new(name, residual, tolerance, Bound::AtMost, note)
    }

    pub fn at_least(name: impl Into<String>, residual: f64, tolerance: f64, note: impl Into<String>) -> Self {
        Self::new(name, residual, tolerance, Bound::AtLeast, note)
    }

    /// Failure count that must be zero.
    pub fn none_failed(name: impl Into<String>, failures: usize, note: impl Into<String>) -> Self {
        Self::at_most(name, failures as f64, 0.0, note)
    }

    pub fn errored(name: impl Into<String>, tolerance: f64, bound: Bound, err: impl std::fmt::Display) -> Self {
        Self { name: name.into(), passed: false, residual: None, tolerance, bound, note: format!("error: {err}") }
    }

    /// Runs `f` and turns an error into a failed check.
    pub fn guarded<E: std::fmt::Display>(
        name: &str,
        tolerance: f64,
        bound: Bound,
        note: &str,
        f: impl FnOnce() -> std::result::Result<f64, E>,
    ) -> Self {
        match f() {
            Ok(r) => Self::new(name, r, tolerance, bound, note),
            Err(e) => Self::errored(name, tolerance, bound, e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64, config: BTreeMap<String, String>, checks: Vec<Check>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Self { schema_version: SCHEMA_VERSION, suite: suite.into(), seed, config, passed, checks }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serialises");
        s.push('\n');
        s
    }

    /// One row per check; the suite, seed and config go in the JSON form only.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Usage(e.to_string());
        w.write_record(["name", "passed", "residual", "tolerance", "bound", "note"]).map_err(err)?;
        for c in &self.checks {
            let bound = match c.bound {
                Bound::AtMost => "at_most",
                Bound::AtLeast => "at_least",
            };
            let residual = c.residual.map(|r| format!("{r:e}")).unwrap_or_default();
            w.write_record([
                c.name.as_str(),
                if c.passed { "true" } else { "false" },
                residual.as_str(),
                format!("{:e}", c.tolerance).as_str(),
                bound,
                c.note.as_str(),
            ])
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_and_errors() {
        assert!(Check::at_most("a", 1e-13, 1e-12, "").passed);
        assert!(!Check::at_most("a", 1e-11, 1e-12, "").passed);
        assert!(Check::at_least("a", 3.0, 1.0, "").passed);
        let nan = Check::at_most("a", f64::NAN, 1.0, "");
        assert!(!nan.passed && nan.residual.is_none());
        let e = Check::guarded("a", 1.0, Bound::AtMost, "", || Err::<f64, _>("boom"));
        assert!(!e.passed && e.note.contains("boom"));
    }

    #[test]
    fn encodings() {
        let r = SuiteReport::new(
            "x",
            7,
            BTreeMap::new(),
            vec![Check::none_failed("ok", 0, "n, with comma"), Check::at_most("bad", 2.0, 1.0, "")],
        );
        assert!(!r.passed);
        assert_eq!(r.failed().count(), 1);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["checks"][1]["residual"], 2.0);
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.contains("\"n, with comma\""));
    }
}
