use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use majorant_cli::plot::{emit_plot, PlotKind};
use majorant_cli::report::{RunReport, Verdict};
use majorant_cli::{ConfigError, ExperimentConfig, RunError, RunOptions};
use tempfile::TempDir;

fn majorant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majorant")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const SMALL_IDENTITY: &str = r#"
experiment = "verify-identity"
seed = 42
reps = 400
t_grid = [5.0, 20.0]
[model]
kind = "compound-poisson"
rate = 2.0
mu = -0.3
jump = { kind = "two-point", p_up = 0.4, up = 1.0, down = -0.5 }
"#;

fn run_text(text: &str, options: RunOptions) -> Result<RunReport, RunError> {
    let config = ExperimentConfig::from_str_for(Path::new("inline.toml"), text)?;
    majorant_cli::run(&config, text, &options)
}

#[test]
fn output_is_identical_across_worker_counts() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "c.toml", SMALL_IDENTITY);
    let mut bodies = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("w{workers}"));
        let o = majorant(&["run", "--config", config.to_str().unwrap(), "--workers", workers, "--out", out.to_str().unwrap()]);
        assert!(o.status.code().is_some_and(|c| c == 0 || c == 1), "{}", String::from_utf8_lossy(&o.stderr));
        bodies.push((fs::read(out.join("report.csv")).unwrap(), fs::read(out.join("samples.csv")).unwrap()));
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn seed_override_changes_draws() {
    let a = run_text(SMALL_IDENTITY, RunOptions::default()).unwrap();
    let b = run_text(SMALL_IDENTITY, RunOptions { seed: Some(43), ..RunOptions::default() }).unwrap();
    assert_eq!(a.provenance.seed, 42);
    assert_eq!(b.provenance.seed, 43);
    assert_ne!(a.samples, b.samples);
}

#[test]
fn report_headers_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let report = run_text(SMALL_IDENTITY, RunOptions { out: Some(out.clone()), ..RunOptions::default() }).unwrap();
    let csv = fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "experiment,T,statistic,estimate,se_or_d,p_value,threshold,verdict");
    assert_eq!(fs::read_to_string(out.join("samples.csv")).unwrap().lines().next().unwrap(), "set,index,value");
    assert_eq!(csv.lines().count(), 1 + report.rows.len());
    let back = RunReport::read(&out.join("summary.json")).unwrap();
    assert_eq!(back.rows, report.rows);
    assert_eq!(back.samples, report.samples);
    assert_eq!(back.schema_version, 1);
}

#[test]
fn stick_count_example() {
    let report = run_text(
        "experiment = \"sb-props\"\nmode = \"tau\"\nseed = 5\nreps = 100000\nlog_t_grid = [4.0]\n",
        RunOptions::default(),
    )
    .unwrap();
    let mean = report.row("tau_mean", None).unwrap();
    let var = report.row("tau_var", None).unwrap();
    assert!((mean.estimate - 4.0).abs() < 0.05);
    assert!((var.estimate - 4.0).abs() < 0.15);
    assert!(report.all_pass());
}

#[test]
fn regime_mismatch_is_rejected_before_sampling() {
    let text = "experiment = \"verify-clt\"\nseed = 1\nreps = 100\nt_grid = [100.0]\n[model]\nkind = \"brownian\"\nsigma = 1.0\nmu = 0.5\n";
    assert!(matches!(run_text(text, RunOptions::default()), Err(RunError::Config(ConfigError::Regime { .. }))));
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "bad.toml", text);
    let out = dir.path().join("never");
    let o = majorant(&["run", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());

    let stable = "experiment = \"verify-stable\"\nseed = 1\nreps = 100\nt_grid = [100.0]\n[model]\nkind = \"stable\"\nalpha = 0.7\n";
    assert!(matches!(run_text(stable, RunOptions::default()), Err(RunError::Config(ConfigError::Regime { .. }))));
    let mode = "experiment = \"sb-props\"\nmode = \"nope\"\nseed = 1\nreps = 100\nt_grid = [10.0]\n";
    assert!(matches!(run_text(mode, RunOptions::default()), Err(RunError::Config(ConfigError::UnknownMode { .. }))));
}

#[test]
fn exit_code_reflects_verdicts() {
    let dir = TempDir::new().unwrap();
    let good = write_config(dir.path(), "good.toml", "experiment = \"hull-suite\"\nseed = 3\nreps = 200\n");
    assert_eq!(majorant(&["run", "--config", good.to_str().unwrap()]).status.code(), Some(0));
    // a single jump size x gives Θ(T)/log T = x²/2 for T ≤ x², which does not decrease
    let flat = write_config(
        dir.path(),
        "flat.toml",
        "experiment = \"theta-scan\"\nseed = 3\nreps = 100\nt_grid = [10.0, 50.0]\n[model]\nkind = \"compound-poisson\"\nrate = 1.0\njump = { kind = \"point-mass\", x = 10.0 }\n",
    );
    let o = majorant(&["run", "--config", flat.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL theta-scan theta_over_log_t_decreasing"));
    assert_eq!(majorant(&["run", "--config", "/no/such/file.toml"]).status.code(), Some(2));
}

#[test]
fn plot_kinds() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    run_text(SMALL_IDENTITY, RunOptions { out: Some(out.clone()), ..RunOptions::default() }).unwrap();

    let ecdf = fs::read_to_string(emit_plot(&out, PlotKind::EcdfPair).unwrap()).unwrap();
    assert_eq!(ecdf.lines().next().unwrap(), "pair,side,x,ecdf");
    let qq = fs::read_to_string(emit_plot(&out.join("summary.json"), PlotKind::Qq).unwrap()).unwrap();
    assert_eq!(qq.lines().count(), 1 + 8 * 200);
    assert!(matches!(emit_plot(&out, PlotKind::ScalingTable), Err(RunError::ReportContent(_))));

    let o = majorant(&["emit-plot", "--report", out.to_str().unwrap(), "--kind", "tail-loglog"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("plot_tail_loglog.csv").exists());

    // a run without sample pairs cannot give an ECDF pair
    let theta = dir.path().join("theta");
    run_text(
        "experiment = \"theta-scan\"\nseed = 1\nreps = 100\nt_grid = [10.0]\n[model]\nkind = \"compound-poisson\"\nrate = 1.0\njump = { kind = \"point-mass\", x = 2.0 }\n",
        RunOptions { out: Some(theta.clone()), ..RunOptions::default() },
    )
    .unwrap();
    assert!(matches!(emit_plot(&theta, PlotKind::EcdfPair), Err(RunError::ReportContent(_))));
}

#[test]
fn ecdf_pair_on_identical_samples_gives_identical_curves() {
    let dir = TempDir::new().unwrap();
    let mut report = run_text(
        "experiment = \"theta-scan\"\nseed = 1\nreps = 100\nt_grid = [10.0]\n[model]\nkind = \"compound-poisson\"\nrate = 1.0\njump = { kind = \"point-mass\", x = 2.0 }\n",
        RunOptions::default(),
    )
    .unwrap();
    let xs: Vec<f64> = (0..500).map(|i| ((i * 37) % 101) as f64).collect();
    report.samples.insert("a".into(), xs.clone());
    report.samples.insert("b".into(), xs);
    report.pairs.push(("a".into(), "b".into()));
    report.write(dir.path()).unwrap();
    let text = fs::read_to_string(emit_plot(dir.path(), PlotKind::EcdfPair).unwrap()).unwrap();
    let side = |s: &str| -> Vec<String> {
        text.lines().skip(1).filter(|l| l.split(',').nth(1) == Some(s)).map(|l| l.split(',').skip(2).collect::<Vec<_>>().join(",")).collect()
    };
    assert!(!side("x").is_empty());
    assert_eq!(side("x"), side("y"));
}

#[test]
fn tail_loglog_recovers_pareto_index() {
    let dir = TempDir::new().unwrap();
    let mut report = run_text(
        "experiment = \"theta-scan\"\nseed = 1\nreps = 100\nt_grid = [10.0]\n[model]\nkind = \"compound-poisson\"\nrate = 1.0\njump = { kind = \"point-mass\", x = 2.0 }\n",
        RunOptions::default(),
    )
    .unwrap();
    // exact Pareto(1.2) quantiles
    let n = 200_000;
    let xs: Vec<f64> = (0..n).map(|i| (1.0 - (i as f64 + 0.5) / n as f64).powf(-1.0 / 1.2)).collect();
    report.samples.insert("pareto".into(), xs);
    report.write(dir.path()).unwrap();
    let text = fs::read_to_string(emit_plot(dir.path(), PlotKind::TailLoglog).unwrap()).unwrap();
    let slope: f64 = text.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert!((slope + 1.2).abs() < 0.02, "slope {slope}");
}

#[test]
fn scaling_table_has_three_kinds_per_horizon() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cmp");
    let report = run_text(
        "experiment = \"compare-length\"\nseed = 9\nreps = 2000\nt_grid = [1e3, 1e6]\n[model]\nkind = \"brownian\"\nsigma = 1.0\n",
        RunOptions { out: Some(out.clone()), ..RunOptions::default() },
    )
    .unwrap();
    assert!(report.rows.iter().any(|r| r.verdict == Verdict::Pass));
    let text = fs::read_to_string(emit_plot(&out, PlotKind::ScalingTable).unwrap()).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "T,kind,scale,predicted_growth,normalized");
    assert_eq!(lines.len(), 1 + 2 * 3);
}
