use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::files::SCHEMA;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One checked instance of a suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub status: Status,
    pub measured: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Case {
    pub fn new(id: impl Into<String>) -> Self {
        Case { id: id.into(), status: Status::Pass, measured: BTreeMap::new(), tolerances: BTreeMap::new(), note: None }
    }

    pub fn measure(mut self, key: &str, value: f64) -> Self {
        self.measured.insert(key.to_string(), value);
        self
    }

    pub fn tolerance(mut self, key: &str, value: f64) -> Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Sets the status from `ok`. A failing case always carries at least
    /// one measured value.
    pub fn check(mut self, ok: bool) -> Self {
        self.status = if ok { Status::Pass } else { Status::Fail };
        if !ok && self.measured.is_empty() {
            self.measured.insert("ok".into(), 0.0);
        }
        self
    }

    pub fn skip(mut self, why: impl Into<String>) -> Self {
        self.status = Status::Skip;
        self.note = Some(why.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub seed: u64,
    pub params_hash: String,
    pub cases: Vec<Case>,
    /// Only filled on request, so reports stay byte-reproducible by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl SuiteReport {
    /// Sorts the cases by id.
    pub fn new(suite: &str, seed: u64, params_hash: &str, mut cases: Vec<Case>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        SuiteReport { schema: SCHEMA, suite: suite.into(), seed, params_hash: params_hash.into(), cases, wall_time_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.cases.iter().filter(|c| c.status == status).count()
    }

    /// Summary line plus one line per failing case.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = write!(
            out,
            "{:<16} {verdict}  pass {:>6}  fail {:>4}  skip {:>4}",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip)
        );
        if let Some(ms) = self.wall_time_ms {
            let _ = write!(out, "  {ms:.0} ms");
        }
        out.push('\n');
        for c in self.cases.iter().filter(|c| c.status == Status::Fail) {
            let vals: Vec<String> = c.measured.iter().map(|(k, v)| format!("{k}={v:e}")).collect();
            let _ = write!(out, "  FAIL {}: {}", c.id, vals.join(" "));
            if let Some(n) = &c.note {
                let _ = write!(out, " ({n})");
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_cases_carry_values_and_sort_by_id() {
        let cases = vec![Case::new("b").check(true), Case::new("a").check(false)];
        let r = SuiteReport::new("demo", 1, "h", cases);
        assert_eq!(r.cases[0].id, "a");
        assert!(!r.cases[0].measured.is_empty());
        assert!(!r.passed());
        assert!(r.table().contains("FAIL a"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"status\":\"fail\"") && !json.contains("wall_time_ms"));
        assert_eq!(serde_json::from_str::<SuiteReport>(&json).unwrap(), r);
    }
}
