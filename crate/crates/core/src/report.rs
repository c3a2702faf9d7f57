//! Machine-readable outcome of a verification check.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The data cannot decide the check (resolution, truncation).
    Inconclusive,
    /// The check does not apply to the inputs (e.g. equal K-types).
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub pair: String,
    pub tolerance: f64,
    pub observed: f64,
    pub pass: bool,
    pub status: Status,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    /// Pass iff `observed < tolerance`.
    pub fn below(check: &str, pair: impl ToString, tolerance: f64, observed: f64) -> Self {
        Self::decided(check, pair, tolerance, observed, observed < tolerance)
    }

    pub fn decided(check: &str, pair: impl ToString, tolerance: f64, observed: f64, pass: bool) -> Self {
        Self {
            check: check.to_string(),
            pair: pair.to_string(),
            tolerance,
            observed,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            details: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn not_applicable(check: &str, pair: impl ToString, why: &str) -> Self {
        let mut r = Self::decided(check, pair, 0.0, 0.0, true);
        r.status = Status::NotApplicable;
        r.notes.push(why.to_string());
        r
    }

    pub fn inconclusive(mut self, why: impl Into<String>) -> Self {
        self.pass = false;
        self.status = Status::Inconclusive;
        self.notes.push(why.into());
        self
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// Merge a set of sub-reports: passes iff all pass; inconclusive if any
    /// is inconclusive and none fails.
    pub fn all(check: &str, pair: impl ToString, tolerance: f64, parts: Vec<Report>) -> Self {
        let observed = parts.iter().map(|r| r.observed).fold(0.0, f64::max);
        let failed = parts.iter().any(|r| r.status == Status::Fail);
        let unsure = parts.iter().any(|r| r.status == Status::Inconclusive);
        let mut r = Self::decided(check, pair, tolerance, observed, !failed && !unsure);
        if unsure && !failed {
            r.status = Status::Inconclusive;
        }
        r.with("parts", parts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
