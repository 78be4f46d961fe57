//! Check records and their CSV / JSON serialization.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::error::{CliError, Result};

/// Scientific notation with 17 significant digits.
pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub check_id: String,
    pub paper_ref: String,
    pub expected: f64,
    pub computed: f64,
    pub abs_error: f64,
    pub tol: f64,
    pub passed: bool,
    pub evaluations: usize,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Record {
    /// `|computed - expected| ≤ tol`.
    pub fn close(id: String, reference: &str, computed: f64, expected: f64, tol: f64) -> Self {
        Self::finish(id, reference, computed, expected, (computed - expected).abs(), tol)
    }

    /// `computed ≤ bound`; the error is the excess over the bound.
    pub fn at_most(id: String, reference: &str, computed: f64, bound: f64, tol: f64) -> Self {
        Self::finish(id, reference, computed, bound, (computed - bound).max(0.0), tol)
    }

    /// A check whose computation itself failed.
    pub fn failed(id: String, reference: &str, expected: f64, tol: f64, err: impl std::fmt::Display) -> Self {
        let mut r = Self::finish(id, reference, f64::NAN, expected, f64::NAN, tol);
        r.error = Some(err.to_string());
        r
    }

    fn finish(check_id: String, reference: &str, computed: f64, expected: f64, abs_error: f64, tol: f64) -> Self {
        Self {
            check_id,
            paper_ref: reference.to_owned(),
            expected,
            computed,
            abs_error,
            tol,
            passed: abs_error <= tol,
            evaluations: 0,
            wall_time_s: 0.0,
            error: None,
        }
    }

    pub fn with_cost(mut self, evaluations: usize, started: Instant) -> Self {
        self.evaluations = evaluations;
        self.wall_time_s = started.elapsed().as_secs_f64();
        self
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    checks: usize,
    passed: usize,
    failed: usize,
    records: &'a [Record],
}

impl Report {
    pub fn extend(&mut self, records: impl IntoIterator<Item = Record>) {
        self.records.extend(records);
    }

    /// Orders rows by check id so the output does not depend on evaluation
    /// order.
    pub fn sort(&mut self) {
        self.records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    }

    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    /// CSV with the columns `check_id, paper_ref, expected, computed,
    /// abs_error, tol, passed`; timing is left out so reruns are identical.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::usage(format!("csv: {e}"));
        w.write_record(["check_id", "paper_ref", "expected", "computed", "abs_error", "tol", "passed"]).map_err(io)?;
        for r in &self.records {
            w.write_record([
                r.check_id.as_str(),
                r.paper_ref.as_str(),
                &sci(r.expected),
                &sci(r.computed),
                &sci(r.abs_error),
                &sci(r.tol),
                if r.passed { "true" } else { "false" },
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::usage(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        let passed = self.passed();
        let body = JsonReport { checks: self.records.len(), passed, failed: self.records.len() - passed, records: &self.records };
        serde_json::to_string_pretty(&body).expect("report serializes")
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_owned(), source })?;
    }
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows_are_sorted_and_quoted() {
        let mut r = Report::default();
        r.extend([
            Record::close("b".into(), "x, y", 1.0, 1.0, 0.0),
            Record::at_most("a".into(), "bound", 2.0, 1.0, 0.5),
        ]);
        r.sort();
        let csv = r.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "check_id,paper_ref,expected,computed,abs_error,tol,passed");
        assert!(lines[1].starts_with("a,bound,1.0000000000000000e0,2.0000000000000000e0,1.0000000000000000e0"));
        assert!(lines[1].ends_with("false"));
        assert!(lines[2].starts_with("b,\"x, y\","));
        assert!(!r.all_passed());
        assert_eq!(r.passed(), 1);
    }

    #[test]
    fn failed_computations_never_pass() {
        let r = Record::failed("c".into(), "ref", 0.0, 1.0, "boom");
        assert!(!r.passed && r.error.as_deref() == Some("boom"));
        assert!(Report { records: vec![r] }.to_json().contains("\"failed\": 1"));
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(sci(0.1), "1.0000000000000001e-1");
        assert_eq!(sci(-1.0), "-1.0000000000000000e0");
    }
}
