//! Suite summaries and their JSON / CSV serialization.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::suite::{Outcome, SweepConfig, TrialReport};
use crate::error::{invalid, Error, Result};

/// Upper edges of the positive slack bins.
const POSITIVE_EDGES: [(f64, &str); 6] = [
    (1e-15, "(0, 1e-15]"),
    (1e-12, "(1e-15, 1e-12]"),
    (1e-9, "(1e-12, 1e-9]"),
    (1e-6, "(1e-9, 1e-6]"),
    (1e-3, "(1e-6, 1e-3]"),
    (1.0, "(1e-3, 1]"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackBin {
    pub label: String,
    pub count: usize,
}

fn empty_histogram() -> Vec<SlackBin> {
    let mut labels = vec!["< -tol", "[-tol, 0)", "0"];
    labels.extend(POSITIVE_EDGES.iter().map(|(_, l)| *l));
    labels.push("> 1");
    labels.into_iter().map(|l| SlackBin { label: l.to_string(), count: 0 }).collect()
}

fn histogram_bin(slack: f64, tol: f64) -> usize {
    if !(slack >= -tol) {
        0
    } else if slack < 0.0 {
        1
    } else if slack == 0.0 {
        2
    } else {
        POSITIVE_EDGES.iter().position(|&(edge, _)| slack <= edge).map_or(3 + POSITIVE_EDGES.len(), |k| 3 + k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub tolerance: f64,
    pub pass: usize,
    pub fail: usize,
    pub undefined: usize,
    pub skipped: usize,
    pub worst_slack: Option<f64>,
    pub worst_digest: Option<String>,
    pub slack_histogram: Vec<SlackBin>,
    /// Undefined and skipped outcomes by category.
    pub exclusions: BTreeMap<String, usize>,
}

impl CheckSummary {
    pub fn new(name: &str, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            tolerance,
            pass: 0,
            fail: 0,
            undefined: 0,
            skipped: 0,
            worst_slack: None,
            worst_digest: None,
            slack_histogram: empty_histogram(),
            exclusions: BTreeMap::new(),
        }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.undefined + self.skipped
    }

    fn consider_worst(&mut self, slack: f64, digest: &str) {
        let replace = match self.worst_slack {
            None => true,
            Some(w) => slack < w || (slack.is_nan() && !w.is_nan()),
        };
        if replace {
            self.worst_slack = Some(slack);
            self.worst_digest = Some(digest.to_string());
        }
    }

    fn record(&mut self, r: &TrialReport) {
        match r.outcome {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::AngleUndefined => self.undefined += 1,
            Outcome::Skipped => self.skipped += 1,
        }
        if let Some(s) = r.worst_slack {
            self.slack_histogram[histogram_bin(s, self.tolerance)].count += 1;
            self.consider_worst(s, &r.inputs_digest);
        }
        if let Some(reason) = r.reason {
            *self.exclusions.entry(reason.to_string()).or_default() += 1;
        }
    }

    /// Adds `later`, which covers trials after the ones already counted.
    fn merge(&mut self, later: &CheckSummary) {
        self.pass += later.pass;
        self.fail += later.fail;
        self.undefined += later.undefined;
        self.skipped += later.skipped;
        for (bin, other) in self.slack_histogram.iter_mut().zip(&later.slack_histogram) {
            bin.count += other.count;
        }
        if let (Some(s), Some(d)) = (later.worst_slack, later.worst_digest.as_deref()) {
            self.consider_worst(s, d);
        }
        for (k, v) in &later.exclusions {
            *self.exclusions.entry(k.clone()).or_default() += v;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub config: SweepConfig,
    pub checks: Vec<CheckSummary>,
    pub wall_ms: u64,
}

impl SuiteSummary {
    /// Zero-count rows for every check the configuration selects.
    pub fn empty(config: SweepConfig) -> Self {
        let names: Vec<&str> = config.selected_checks().map(|c| c.name).collect();
        Self::empty_for(config, &names)
    }

    pub(crate) fn empty_for(config: SweepConfig, names: &[&str]) -> Self {
        let checks = names.iter().map(|n| CheckSummary::new(n, config.tolerance(n))).collect();
        Self { config, checks, wall_ms: 0 }
    }

    pub(crate) fn record(&mut self, r: &TrialReport) {
        if let Some(c) = self.checks.iter_mut().find(|c| c.name == r.check) {
            c.record(r);
        }
    }

    pub(crate) fn merge(&mut self, later: &SuiteSummary) {
        for (c, other) in self.checks.iter_mut().zip(&later.checks) {
            c.merge(other);
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn total_fails(&self) -> usize {
        self.checks.iter().map(|c| c.fail).sum()
    }

    pub fn all_pass(&self) -> bool {
        self.total_fails() == 0
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Json(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            w.serialize(CsvRow::from(c)).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Json(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// One CSV row: `name,pass,fail,undefined,skipped,worst_slack`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub name: String,
    pub pass: usize,
    pub fail: usize,
    pub undefined: usize,
    pub skipped: usize,
    pub worst_slack: Option<f64>,
}

impl From<&CheckSummary> for CsvRow {
    fn from(c: &CheckSummary) -> Self {
        Self {
            name: c.name.clone(),
            pass: c.pass,
            fail: c.fail,
            undefined: c.undefined,
            skipped: c.skipped,
            worst_slack: c.worst_slack,
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Json(format!("csv: {e}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => invalid(format!("unknown report format '{other}' (expected json or csv)")),
        }
    }
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

pub fn write_report(summary: &SuiteSummary, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ReportFormat::Json => summary.to_json()?,
        ReportFormat::Csv => summary.to_csv()?,
    };
    fs::write(path, text).map_err(|e| io_error(path, e))
}

pub fn read_report(path: impl AsRef<Path>) -> Result<SuiteSummary> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

pub fn read_csv_report(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect::<std::result::Result<_, _>>().map_err(csv_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::suite::run_suite;

    fn tiny() -> SweepConfig {
        SweepConfig {
            seed: 11,
            trials: 20,
            operator_trials: 4,
            vectors_per_matrix: 2,
            grid_points: 40,
            dims: vec![2],
            v_grid: vec![0.5],
            ..SweepConfig::default()
        }
    }

    #[test]
    fn histogram_bins() {
        assert_eq!(histogram_bin(-1.0, 1e-8), 0);
        assert_eq!(histogram_bin(f64::NAN, 1e-8), 0);
        assert_eq!(histogram_bin(-1e-9, 1e-8), 1);
        assert_eq!(histogram_bin(0.0, 1e-8), 2);
        assert_eq!(histogram_bin(1e-16, 1e-8), 3);
        assert_eq!(histogram_bin(0.5, 1e-8), 8);
        assert_eq!(histogram_bin(3.0, 1e-8), 9);
        assert_eq!(empty_histogram().len(), 10);
    }

    #[test]
    fn empty_summary_files() {
        let dir = tempfile::tempdir().unwrap();
        let s = SuiteSummary::empty(tiny());
        let jp = dir.path().join("empty.json");
        let cp = dir.path().join("empty.csv");
        write_report(&s, &jp, ReportFormat::Json).unwrap();
        write_report(&s, &cp, ReportFormat::Csv).unwrap();
        assert_eq!(read_report(&jp).unwrap(), s);
        let rows = read_csv_report(&cp).unwrap();
        assert_eq!(rows.len(), s.checks.len());
        assert!(rows.iter().all(|r| r.pass + r.fail + r.undefined + r.skipped == 0 && r.worst_slack.is_none()));
        let header = std::fs::read_to_string(&cp).unwrap();
        assert!(header.starts_with("name,pass,fail,undefined,skipped,worst_slack\n"));
    }

    #[test]
    fn json_echoes_config_and_agrees_with_csv() {
        let dir = tempfile::tempdir().unwrap();
        let s = run_suite(&tiny()).unwrap();
        let jp = dir.path().join("r.json");
        let cp = dir.path().join("r.csv");
        write_report(&s, &jp, ReportFormat::Json).unwrap();
        write_report(&s, &cp, ReportFormat::Csv).unwrap();
        let back = read_report(&jp).unwrap();
        assert_eq!(back.config, tiny());
        assert_eq!(back, s);
        for (row, c) in read_csv_report(&cp).unwrap().iter().zip(&back.checks) {
            assert_eq!(row, &CsvRow::from(c));
        }
        let raw: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&jp).unwrap()).unwrap();
        for key in ["config", "checks", "wall_ms"] {
            assert!(raw.get(key).is_some(), "{key}");
        }
        for key in ["name", "pass", "fail", "undefined", "skipped", "worst_slack", "worst_digest"] {
            assert!(raw["checks"][0].get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn io_errors_carry_the_path() {
        let s = SuiteSummary::empty(tiny());
        let err = write_report(&s, "/nonexistent-dir/x/report.json", ReportFormat::Json).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x/report.json"));
        assert!("xml".parse::<ReportFormat>().is_err());
    }
}
