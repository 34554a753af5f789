use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub const SUITE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Outcome of one registered check over its whole sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub parameters: BTreeMap<String, String>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
}

impl VerificationReport {
    pub fn new(
        check_name: &str,
        parameters: BTreeMap<String, String>,
        max_residual: f64,
        tolerance: f64,
        runtime_ms: u64,
    ) -> Self {
        Self {
            check_name: check_name.to_string(),
            parameters,
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            runtime_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_version: String,
    pub seed: u64,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn new(seed: u64, reports: Vec<VerificationReport>) -> Self {
        Self { suite_version: SUITE_VERSION.to_string(), seed, reports }
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (expected json or text)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("writing report to {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("encoding report: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn to_json(report: &SuiteReport) -> Result<String, serde_json::Error> {
    serde_json::to_string_pretty(report)
}

pub fn from_json(text: &str) -> Result<SuiteReport, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn to_text(report: &SuiteReport) -> String {
    let mut out = format!("suite {} seed {}\n", report.suite_version, report.seed);
    for r in &report.reports {
        let params: Vec<String> = r.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(
            out,
            "{} {:<24} max_residual={:.3e} tolerance={:.1e} runtime_ms={} {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.check_name,
            r.max_residual,
            r.tolerance,
            r.runtime_ms,
            params.join(" ")
        );
    }
    out
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn emit_report(report: &SuiteReport, format: Format, path: Option<&Path>) -> Result<(), ReportError> {
    let mut body = match format {
        Format::Json => to_json(report)?,
        Format::Text => to_text(report),
    };
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match path {
        Some(p) => std::fs::write(p, body).map_err(|source| ReportError::Io { path: p.to_path_buf(), source }),
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|source| ReportError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}
