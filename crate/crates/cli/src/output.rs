//! Report assembly: the versioned JSON document and the text table.

use std::fmt::Write;

use serde_json::{json, Map, Value};
use supmech_core::report::Check;
use supmech_core::Status;

use crate::suites::{SuiteOutput, SuiteSpec};

pub const SCHEMA_VERSION: u32 = 1;

pub struct SuiteRun {
    pub spec: SuiteSpec,
    pub output: SuiteOutput,
    pub elapsed_s: f64,
}

pub struct Document<'a> {
    pub name: &'a str,
    pub seed: Option<u64>,
    pub runs: &'a [SuiteRun],
    pub started: String,
    pub elapsed_s: f64,
}

impl Document<'_> {
    fn checks(&self) -> impl Iterator<Item = (&str, &Check)> {
        self.runs.iter().flat_map(|r| r.output.report.checks.iter().map(move |c| (r.spec.name(), c)))
    }

    pub fn passed(&self) -> bool {
        self.checks().all(|(_, c)| c.status == Status::Pass)
    }

    /// Everything but `timestamp` depends only on the scenario and seed.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .checks()
            .map(|(suite, c)| {
                let mut v = serde_json::to_value(c).unwrap_or(Value::Null);
                if let Value::Object(m) = &mut v {
                    let mut out = Map::new();
                    out.insert("suite".into(), json!(suite));
                    out.append(m);
                    return Value::Object(out);
                }
                v
            })
            .collect();
        let total = entries.len();
        let failed = self.checks().filter(|(_, c)| c.status == Status::Fail).count();
        let results: Vec<Value> = self
            .runs
            .iter()
            .map(|r| json!({"suite": r.spec.name(), "parameters": r.spec.parameters(), "data": r.output.data}))
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "suite": self.name,
            "status": if self.passed() { "pass" } else { "fail" },
            "seed": self.seed,
            "summary": {"entries": total, "passed": total - failed, "failed": failed},
            "entries": entries,
            "results": results,
            "environment": {
                "tool": "supmech",
                "version": env!("CARGO_PKG_VERSION"),
                "os": std::env::consts::OS,
                "arch": std::env::consts::ARCH,
            },
            "timestamp": {
                "started": self.started,
                "elapsed_s": self.elapsed_s,
                "suites_s": self.runs.iter().map(|r| r.elapsed_s).collect::<Vec<_>>(),
            },
        })
    }

    /// Fixed-width table, one row per check, failure details underneath.
    pub fn to_text(&self) -> String {
        let header = ["suite", "group", "id", "status", "residual", "tolerance", "anchor"];
        let rows: Vec<[String; 7]> = self
            .checks()
            .map(|(suite, c)| {
                [
                    suite.to_string(),
                    c.group.clone(),
                    c.id.clone(),
                    if c.status == Status::Pass { "pass" } else { "FAIL" }.to_string(),
                    format!("{:.3e}", c.residual),
                    format!("{:.1e}", c.tolerance),
                    c.anchor.clone(),
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[&str]| {
            let mut s = String::new();
            for (k, (cell, w)) in cells.iter().zip(width).enumerate() {
                if k + 1 == cells.len() {
                    s.push_str(cell);
                } else if (4..6).contains(&k) {
                    let _ = write!(s, "{cell:>w$}  ");
                } else {
                    let _ = write!(s, "{cell:<w$}  ");
                }
            }
            let _ = writeln!(out, "{}", s.trim_end());
        };
        line(&mut out, &header);
        for (row, (_, c)) in rows.iter().zip(self.checks()) {
            line(&mut out, &row.each_ref().map(String::as_str));
            if let (Status::Fail, Some(d)) = (c.status, &c.detail) {
                let _ = writeln!(out, "    {d}");
            }
        }
        let failed = self.checks().filter(|(_, c)| c.status == Status::Fail).count();
        let total = rows.len();
        let _ = writeln!(
            out,
            "{}: {} ({}/{} checks passed, {:.2} s)",
            self.name,
            if self.passed() { "pass" } else { "FAIL" },
            total - failed,
            total,
            self.elapsed_s
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use supmech_core::VerificationReport;

    fn runs() -> Vec<SuiteRun> {
        let mut report = VerificationReport::new("noether");
        report.record("g", "short", "anchor a", 1e-14, 1e-12);
        let c = report.record("group-two", "a-longer-id", "anchor b", 0.5, 1e-3);
        c.detail = Some("too large".into());
        let spec: SuiteSpec = toml::from_str("suite = \"noether\"").unwrap();
        vec![SuiteRun { spec, output: SuiteOutput { report, data: json!({}), csv: vec![] }, elapsed_s: 0.25 }]
    }

    #[test]
    fn json_document_summarizes_entries() {
        let runs = runs();
        let doc = Document { name: "t", seed: Some(3), runs: &runs, started: "now".into(), elapsed_s: 1.0 };
        let v = doc.to_json();
        assert!(!doc.passed());
        assert_eq!(v["status"], "fail");
        assert_eq!(v["summary"], json!({"entries": 2, "passed": 1, "failed": 1}));
        assert_eq!(v["entries"][1]["detail"], "too large");
        assert_eq!(v["entries"][0]["suite"], "noether");
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.first().map(String::as_str), Some("schema_version"));
        assert_eq!(keys.last().map(String::as_str), Some("timestamp"));
    }

    #[test]
    fn text_columns_align() {
        let runs = runs();
        let doc = Document { name: "t", seed: None, runs: &runs, started: "now".into(), elapsed_s: 1.0 };
        let text = doc.to_text();
        let lines: Vec<_> = text.lines().collect();
        let col = |l: &str| l.find("anchor").or_else(|| l.find("anchor a")).unwrap();
        assert_eq!(col(lines[0]), col(lines[1]));
        assert_eq!(col(lines[1]), col(lines[2]));
        assert!(lines[2].contains("FAIL"));
        assert_eq!(lines[3].trim(), "too large");
        assert!(lines[4].starts_with("t: FAIL (1/2 checks passed"));
    }
}
