//! Run reports shared by the suite and the command-line tool.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    SkippedHypothesis,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub extremes: BTreeMap<String, f64>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>) -> Self {
        CheckRecord { name: name.into(), status: Status::Pass, witness: None, extremes: BTreeMap::new() }
    }

    pub fn extreme(mut self, key: &str, value: f64) -> Self {
        self.extremes.insert(key.to_string(), value);
        self
    }

    /// Marks the check failed unless `ok`; the first witness is kept.
    pub fn require(&mut self, ok: bool, witness: impl FnOnce() -> serde_json::Value) {
        if !ok {
            self.status = Status::Fail;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64) -> Self {
        RunReport { command, seed, checks: Vec::new(), wall_time: Duration::ZERO }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    /// Pretty JSON without the wall time, so equal runs give equal bytes.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (seed {})", self.command.join(" "), self.seed);
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::SkippedHypothesis => "skipped-hypothesis",
            };
            let extremes: Vec<String> = c.extremes.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "  {status:<18} {:<24} {}", c.name, extremes.join(" "));
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "      witness: {w}");
            }
        }
        let verdict = if self.passed() { "all checks passed" } else { "some checks failed" };
        let _ = writeln!(out, "{verdict} in {:.2?}", self.wall_time);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_checks_carry_witnesses() {
        let mut c = CheckRecord::new("x").extreme("max", 1.5);
        c.require(true, || serde_json::json!("unused"));
        assert!(c.passed() && c.witness.is_none());
        c.require(false, || serde_json::json!({"p": 1}));
        c.require(false, || serde_json::json!({"p": 2}));
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness, Some(serde_json::json!({"p": 1})));
    }

    #[test]
    fn json_omits_wall_time() {
        let mut r = RunReport::new(vec!["suite".into()], 7);
        r.wall_time = Duration::from_secs(3);
        r.checks.push(CheckRecord::new("a"));
        let s = r.to_json_string();
        assert!(!s.contains("wall"));
        assert!(s.contains("\"status\": \"pass\""));
        assert!(r.human().contains("all checks passed"));
    }
}
