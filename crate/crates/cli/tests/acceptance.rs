//! Runs every acceptance config under `configs/acceptance` and prints one PASS/FAIL line
//! per criterion. Exits nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use majorant_cli::report::Verdict;
use majorant_cli::{ExperimentConfig, RunOptions};

struct Criterion {
    id: u32,
    file: &'static str,
    what: &'static str,
    budget: Option<Duration>,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, file: "c01_stick_counts.toml", what: "stick counts: tau mean/var = log T, E[tau+1-|G|] = 1", budget: secs(30) },
    Criterion { id: 2, file: "c02_compensation.toml", what: "compensation formula on three test functions", budget: secs(30) },
    Criterion { id: 3, file: "c03_exact_identity.toml", what: "exact path hull vs stick-breaking sampler, KS p > 0.01", budget: secs(300) },
    Criterion { id: 4, file: "c04_clt_trend.toml", what: "centred length vs N(0, 3/4): D decreasing, final D < 0.1, variance within 15%", budget: secs(600) },
    Criterion { id: 5, file: "c05_clt_structure.toml", what: "length fluctuation uncorrelated with sup/final/gamma, centring identity exact", budget: None },
    Criterion { id: 6, file: "c06_stable_zero_mean.toml", what: "alpha = 1.5 at T = 1e5 vs limit series, KS p > 0.01 on four coordinates", budget: secs(600) },
    Criterion { id: 7, file: "c07_tail_index.toml", what: "Q tail slope -0.75 +- 0.1 and perpetuity KS p > 0.01", budget: secs(300) },
    Criterion { id: 8, file: "c08_positive_drift.toml", what: "positive drift: slope 1/sqrt(2) within 5%, ratio structure", budget: None },
    Criterion { id: 9, file: "c09_small_index.toml", what: "alpha = 0.5: length KS p > 0.01, sandwich on every draw", budget: None },
    Criterion { id: 10, file: "c10_compare_length.toml", what: "hut/majorant/tent scale ratios monotone in T", budget: None },
    Criterion { id: 11, file: "c11_hull_suite.toml", what: "hull invariants on random paths, ten-point oracle exact", budget: None },
    Criterion { id: 12, file: "c12_theta_scan.toml", what: "Theta forms agree to 1e-8, Theta/log T decreasing", budget: None },
];

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/acceptance")
}

fn check(c: &Criterion, out: &Path) -> Result<Vec<String>, String> {
    let path = config_dir().join(c.file);
    let (config, source) = ExperimentConfig::load(&path).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let options = RunOptions { out: Some(out.join(c.file.trim_end_matches(".toml"))), ..RunOptions::default() };
    let report = majorant_cli::run(&config, &source, &options).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    let mut problems: Vec<String> = report
        .rows
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .map(|r| {
            let t = r.t.map(|t| format!(" T={t}")).unwrap_or_default();
            let p = r.p_value.map(|p| format!(" p={p:.4}")).unwrap_or_default();
            format!("{}{t} = {}{p} needs {}", r.statistic, r.estimate, r.threshold)
        })
        .collect();
    if let Some(budget) = c.budget {
        if elapsed > budget {
            problems.push(format!("runtime {:.1}s over {}s", elapsed.as_secs_f64(), budget.as_secs()));
        }
    }
    if problems.is_empty() {
        Ok(vec![format!("{:.1}s", elapsed.as_secs_f64())])
    } else {
        Err(problems.join("; "))
    }
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let out = std::env::temp_dir().join(format!("majorant-acceptance-{}", std::process::id()));
    let mut failed = 0;
    for c in CRITERIA.iter().filter(|c| filter.is_empty() || filter.iter().any(|f| c.file.contains(f.as_str()))) {
        match check(c, &out) {
            Ok(notes) => println!("PASS criterion {:>2}: {} [{}]", c.id, c.what, notes.join(", ")),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {} [{}]", c.id, c.what, why);
            }
        }
    }
    let _ = std::fs::remove_dir_all(&out);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
