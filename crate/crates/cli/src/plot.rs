//! Plot data for external tools. Every kind writes one CSV next to the report:
//!
//! | kind            | file                    | header                                  |
//! |-----------------|-------------------------|-----------------------------------------|
//! | `ecdf-pair`     | `plot_ecdf_pair.csv`    | `pair,side,x,ecdf`                      |
//! | `qq`            | `plot_qq.csv`           | `pair,p,x_quantile,y_quantile`          |
//! | `tail-loglog`   | `plot_tail_loglog.csv`  | `set,x,log_x,log_survival,slope`        |
//! | `scaling-table` | `plot_scaling_table.csv`| `T,kind,scale,predicted_growth,normalized` |
//!
//! Large samples are thinned to evenly spaced order statistics.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use majorant_core::stats::{tail_slope, Ecdf};

use crate::error::RunError;
use crate::report::{run_dir, RunReport};

const MAX_POINTS: usize = 2000;
const QQ_POINTS: usize = 200;
const TAIL_WINDOWS: [(f64, f64); 2] = [(0.99, 0.9999), (0.9, 0.999)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    EcdfPair,
    Qq,
    TailLoglog,
    ScalingTable,
}

impl PlotKind {
    fn file_name(&self) -> &'static str {
        match self {
            PlotKind::EcdfPair => "plot_ecdf_pair.csv",
            PlotKind::Qq => "plot_qq.csv",
            PlotKind::TailLoglog => "plot_tail_loglog.csv",
            PlotKind::ScalingTable => "plot_scaling_table.csv",
        }
    }
}

/// Reads the report at `path` and writes the plot data; returns the file written.
pub fn emit_plot(path: &Path, kind: PlotKind) -> Result<PathBuf, RunError> {
    let report = RunReport::read(path)?;
    let target = run_dir(path).join(kind.file_name());
    let mut w = csv::Writer::from_path(&target).map_err(to_io)?;
    match kind {
        PlotKind::EcdfPair => ecdf_pair(&report, &mut w)?,
        PlotKind::Qq => qq(&report, &mut w)?,
        PlotKind::TailLoglog => tail_loglog(&report, &mut w)?,
        PlotKind::ScalingTable => scaling_table(&report, &mut w)?,
    }
    w.flush()?;
    Ok(target)
}

type Writer = csv::Writer<std::fs::File>;

fn to_io(e: csv::Error) -> RunError {
    RunError::Io(std::io::Error::other(e.to_string()))
}

fn record(w: &mut Writer, fields: &[String]) -> Result<(), RunError> {
    w.write_record(fields).map_err(to_io)
}

fn sample<'a>(report: &'a RunReport, name: &str) -> Result<&'a [f64], RunError> {
    report
        .samples
        .get(name)
        .map(Vec::as_slice)
        .ok_or_else(|| RunError::ReportContent(format!("sample set {name}")))
}

fn pairs(report: &RunReport) -> Result<&[(String, String)], RunError> {
    if report.pairs.is_empty() {
        return Err(RunError::ReportContent("paired sample sets".into()));
    }
    Ok(&report.pairs)
}

fn thinned(n: usize) -> impl Iterator<Item = usize> {
    let step = n.div_ceil(MAX_POINTS).max(1);
    (0..n).step_by(step)
}

fn ecdf_pair(report: &RunReport, w: &mut Writer) -> Result<(), RunError> {
    record(w, &["pair".into(), "side".into(), "x".into(), "ecdf".into()])?;
    for (a, b) in pairs(report)? {
        let pair = format!("{a}|{b}");
        for (side, name) in [("x", a), ("y", b)] {
            let e = Ecdf::new(sample(report, name)?)?;
            let n = e.len();
            for i in thinned(n) {
                let x = e.sorted()[i];
                record(w, &[pair.clone(), side.into(), x.to_string(), e.eval(x).to_string()])?;
            }
        }
    }
    Ok(())
}

fn qq(report: &RunReport, w: &mut Writer) -> Result<(), RunError> {
    record(w, &["pair".into(), "p".into(), "x_quantile".into(), "y_quantile".into()])?;
    for (a, b) in pairs(report)? {
        let ex = Ecdf::new(sample(report, a)?)?;
        let ey = Ecdf::new(sample(report, b)?)?;
        for i in 0..QQ_POINTS {
            let p = (i as f64 + 0.5) / QQ_POINTS as f64;
            record(w, &[format!("{a}|{b}"), p.to_string(), ex.quantile(p).to_string(), ey.quantile(p).to_string()])?;
        }
    }
    Ok(())
}

fn tail_loglog(report: &RunReport, w: &mut Writer) -> Result<(), RunError> {
    if report.samples.is_empty() {
        return Err(RunError::ReportContent("sample sets".into()));
    }
    record(w, &["set".into(), "x".into(), "log_x".into(), "log_survival".into(), "slope".into()])?;
    for (name, values) in &report.samples {
        let slope = TAIL_WINDOWS
            .iter()
            .find_map(|&(lo, hi)| tail_slope(values, lo, hi).ok())
            .map_or(f64::NAN, |fit| fit.slope);
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let n = sorted.len();
        let start = (0.9 * n as f64) as usize;
        let top = &sorted[start..n.saturating_sub(1)];
        for i in thinned(top.len()) {
            let x = top[i];
            if x <= 0.0 {
                continue;
            }
            let survival = (n - start - i - 1) as f64 / n as f64;
            record(w, &[name.clone(), x.to_string(), x.ln().to_string(), survival.ln().to_string(), slope.to_string()])?;
        }
    }
    Ok(())
}

fn scaling_table(report: &RunReport, w: &mut Writer) -> Result<(), RunError> {
    let rows: Vec<_> = report
        .rows
        .iter()
        .filter_map(|r| {
            let kind = r.statistic.strip_prefix("scale_")?;
            if kind.contains('_') {
                return None;
            }
            Some((r.t?, kind.to_string(), r.estimate))
        })
        .collect();
    if rows.is_empty() {
        return Err(RunError::ReportContent("scale_* rows (run compare-length)".into()));
    }
    record(w, &["T".into(), "kind".into(), "scale".into(), "predicted_growth".into(), "normalized".into()])?;
    for (t, kind, scale) in rows {
        let growth = match kind.as_str() {
            "hut" => 1.0,
            "majorant" => t.ln().sqrt(),
            _ => t.sqrt(),
        };
        record(w, &[t.to_string(), kind, scale.to_string(), growth.to_string(), (scale / growth).to_string()])?;
    }
    Ok(())
}
