//! Verification reports shared by the library suites, the CLI and the tests.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub group: String,
    pub anchor: String,
    pub status: Status,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        Self { suite: suite.into(), checks: Vec::new() }
    }

    /// Numerical check: passes iff `residual <= tolerance` (NaN fails).
    pub fn record(
        &mut self,
        group: &str,
        id: impl Into<String>,
        anchor: &str,
        residual: f64,
        tolerance: f64,
    ) -> &mut Check {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        self.checks.push(Check {
            id: id.into(),
            group: group.to_string(),
            anchor: anchor.to_string(),
            status,
            residual,
            tolerance,
            detail: None,
        });
        self.checks.last_mut().expect("just pushed")
    }

    /// Exact check. `residual` is a rendering of the difference, `None`
    /// when it vanishes identically.
    pub fn record_exact(&mut self, group: &str, id: impl Into<String>, anchor: &str, residual: Option<String>) {
        let failed = residual.is_some();
        let c = self.record(group, id, anchor, if failed { 1.0 } else { 0.0 }, 0.0);
        c.detail = residual;
    }

    /// Boolean check with an optional explanation on failure.
    pub fn record_flag(&mut self, group: &str, id: impl Into<String>, anchor: &str, ok: bool, detail: Option<String>) {
        let c = self.record(group, id, anchor, if ok { 0.0 } else { 1.0 }, 0.0);
        if !ok {
            c.detail = detail;
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn group(&self, name: &str) -> impl Iterator<Item = &Check> {
        let name = name.to_string();
        self.checks.iter().filter(move |c| c.group == name)
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        let mut r = VerificationReport::new("t");
        r.record("g", "a", "x", f64::NAN, 1.0);
        assert!(!r.passed());
    }

    #[test]
    fn exact_checks() {
        let mut r = VerificationReport::new("t");
        r.record_exact("g", "a", "x", None);
        assert!(r.passed());
        r.record_exact("g", "b", "x", Some("X1".into()));
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.group("g").count(), 2);
    }
}
