//! Report records, CSV tables and their serialization.

use crate::config::RunConfig;
use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// One check outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub check: String,
    /// Library operation the check exercises, as `module.operation`.
    pub anchor: String,
    /// `None` for boolean checks.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    /// Informational checks only count toward the exit status under a strict policy.
    pub mandatory: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteStatus {
    Passed,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub status: SuiteStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub tool_version: String,
    pub target_os: String,
    pub target_arch: String,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            target_os: std::env::consts::OS.into(),
            target_arch: std::env::consts::ARCH.into(),
        }
    }
}

/// A numeric table written as CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub environment: Environment,
    pub config: Option<RunConfig>,
    pub suites: Vec<SuiteOutcome>,
    pub records: Vec<Record>,
    pub pass: bool,
    #[serde(default)]
    pub tables: Vec<Table>,
}

impl Report {
    pub fn empty() -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            environment: Environment::current(),
            config: None,
            suites: Vec::new(),
            records: Vec::new(),
            pass: true,
            tables: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("report does not match the schema")
    }

    pub fn records_for(&self, suite: &str) -> impl Iterator<Item = &Record> {
        let suite = suite.to_string();
        self.records.iter().filter(move |r| r.suite == suite)
    }

    pub fn find(&self, suite: &str, check: &str) -> Option<&Record> {
        self.records
            .iter()
            .find(|r| r.suite == suite && r.check == check)
    }

    pub fn status(&self, suite: &str) -> Option<&SuiteStatus> {
        self.suites
            .iter()
            .find(|s| s.suite == suite)
            .map(|s| &s.status)
    }

    /// Table of all records, for CSV export.
    pub fn records_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)
            .with_context(|| format!("cannot write {}", path.display()))?;
        w.write_record([
            "suite",
            "check",
            "anchor",
            "residual",
            "tolerance",
            "pass",
            "mandatory",
        ])?;
        let num = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.suite.clone(),
                r.check.clone(),
                r.anchor.clone(),
                num(r.residual),
                num(r.tolerance),
                r.pass.to_string(),
                r.mandatory.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Write `report.json` or `records.csv` plus one CSV per table into `dir`.
pub fn export(report: &Report, format: Format, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut written = Vec::new();
    match format {
        Format::Json => {
            let path = dir.join("report.json");
            std::fs::write(&path, report.to_json()?)
                .with_context(|| format!("cannot write {}", path.display()))?;
            written.push(path);
        }
        Format::Csv => {
            let path = dir.join("records.csv");
            report.records_csv(&path)?;
            written.push(path);
            for t in &report.tables {
                let path = dir.join(format!("{}.csv", t.name));
                t.write_csv(&path)?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_round_trips() {
        let r = Report::empty();
        let text = r.to_json().unwrap();
        assert_eq!(Report::from_json(&text).unwrap(), r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(v["records"].as_array().unwrap().is_empty());
    }

    #[test]
    fn table_header_comes_first() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new("nuclearity", &["s", "total", "n0"]);
        t.rows.push(vec![0.5, 1.25, 1.0]);
        let p = dir.path().join("t.csv");
        t.write_csv(&p).unwrap();
        let text = std::fs::read_to_string(p).unwrap();
        assert!(text.starts_with("s,total,n0\n5e-1,1.25e0,1e0\n"));
    }
}
