//! Run reports and their files.
//!
//! A run directory holds three files:
//!
//! * `report.csv`, header `experiment,T,statistic,estimate,se_or_d,p_value,threshold,verdict`.
//!   One row per statistic. `T` is empty for rows that span the grid, `se_or_d` holds a
//!   standard error or a KS distance, `p_value` is empty unless a test produced one.
//!   `verdict` is `pass`, `fail` or `info`; only `fail` makes the run fail.
//! * `samples.csv`, header `set,index,value`: the sample sets that plots are drawn from.
//! * `summary.json`: the rows again plus the sample-set pairs and a provenance block.
//!   Its layout is versioned by `schema_version`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::RunError;

pub const SCHEMA_VERSION: u32 = 1;
pub const REPORT_FILE: &str = "report.csv";
pub const SAMPLES_FILE: &str = "samples.csv";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub statistic: String,
    pub estimate: f64,
    pub se_or_d: Option<f64>,
    pub p_value: Option<f64>,
    pub threshold: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub crate_version: String,
    pub config_sha256: String,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub experiment: String,
    pub mode: Option<String>,
    pub rows: Vec<Row>,
    /// Sample sets meant to be compared, by name.
    pub pairs: Vec<(String, String)>,
    #[serde(skip)]
    pub samples: BTreeMap<String, Vec<f64>>,
    pub provenance: Provenance,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn row(&self, statistic: &str, t: Option<f64>) -> Option<&Row> {
        self.rows.iter().find(|r| r.statistic == statistic && (t.is_none() || r.t == t))
    }

    pub fn write(&self, dir: &Path) -> Result<(), RunError> {
        fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join(REPORT_FILE)).map_err(csv_io)?;
        for row in &self.rows {
            w.serialize(row).map_err(csv_io)?;
        }
        w.flush()?;

        let mut w = csv::Writer::from_path(dir.join(SAMPLES_FILE)).map_err(csv_io)?;
        w.write_record(["set", "index", "value"]).map_err(csv_io)?;
        for (name, values) in &self.samples {
            for (i, v) in values.iter().enumerate() {
                w.write_record([name.as_str(), &i.to_string(), &v.to_string()]).map_err(csv_io)?;
            }
        }
        w.flush()?;

        let json = serde_json::to_string_pretty(self).map_err(|e| RunError::ReportFormat(e.to_string()))?;
        fs::write(dir.join(SUMMARY_FILE), json + "\n")?;
        Ok(())
    }

    /// Reads a run directory, or the directory of a given `summary.json`.
    pub fn read(path: &Path) -> Result<Self, RunError> {
        let dir = run_dir(path);
        let text = fs::read_to_string(dir.join(SUMMARY_FILE))?;
        let mut report: RunReport =
            serde_json::from_str(&text).map_err(|e| RunError::ReportFormat(e.to_string()))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(RunError::ReportFormat(format!("unsupported schema_version {}", report.schema_version)));
        }
        let samples_path = dir.join(SAMPLES_FILE);
        if samples_path.exists() {
            let mut r = csv::Reader::from_path(samples_path).map_err(csv_io)?;
            for record in r.records() {
                let record = record.map_err(csv_io)?;
                let value: f64 = record
                    .get(2)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| RunError::ReportFormat("bad samples.csv value".into()))?;
                report.samples.entry(record[0].to_string()).or_default().push(value);
            }
        }
        Ok(report)
    }
}

pub fn run_dir(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.to_path_buf()
    } else {
        path.parent().map(Path::to_path_buf).unwrap_or_default()
    }
}

fn csv_io(e: csv::Error) -> RunError {
    RunError::Io(std::io::Error::other(e.to_string()))
}

/// Collects the rows of one experiment.
pub struct RowSink {
    experiment: &'static str,
    pub rows: Vec<Row>,
}

impl RowSink {
    pub fn new(experiment: &'static str) -> Self {
        Self { experiment, rows: Vec::new() }
    }

    pub fn push(
        &mut self,
        t: Option<f64>,
        statistic: impl Into<String>,
        estimate: f64,
        se_or_d: Option<f64>,
        p_value: Option<f64>,
        threshold: impl Into<String>,
        verdict: Verdict,
    ) {
        self.rows.push(Row {
            experiment: self.experiment.to_string(),
            t,
            statistic: statistic.into(),
            estimate,
            se_or_d,
            p_value,
            threshold: threshold.into(),
            verdict,
        });
    }

    /// A row reporting a value without judging it.
    pub fn info(&mut self, t: Option<f64>, statistic: impl Into<String>, estimate: f64, se: Option<f64>) {
        self.push(t, statistic, estimate, se, None, "", Verdict::Info);
    }

    /// `|estimate - target| ≤ k SE`.
    pub fn within_se(&mut self, t: Option<f64>, statistic: impl Into<String>, estimate: f64, se: f64, target: f64, k: f64) {
        let ok = (estimate - target).abs() <= k * se;
        self.push(t, statistic, estimate, Some(se), None, format!("|x-{target}|<={k}se"), Verdict::from_bool(ok));
    }

    /// KS row: passes when `p > level`.
    pub fn ks(&mut self, t: Option<f64>, statistic: impl Into<String>, ks: &majorant_core::stats::KsResult, level: f64) {
        self.push(
            t,
            statistic,
            ks.statistic,
            Some(ks.statistic),
            Some(ks.p_value),
            format!("p>{level}"),
            Verdict::from_bool(ks.p_value > level),
        );
    }
}
