use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use majorant_cli::config::ExperimentConfig;
use majorant_cli::plot::{emit_plot, PlotKind};
use majorant_cli::report::Verdict;
use majorant_cli::RunOptions;

#[derive(Parser)]
#[command(name = "majorant", version, about = "Concave majorant experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config. Exits 0 only if every verdict passes.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write plot data from a run directory (or its summary.json).
    EmitPlot {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum)]
        kind: PlotKind,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    match Cli::parse().command {
        Command::Run { config, seed, workers, out } => {
            let (parsed, source) = ExperimentConfig::load(&config)?;
            let report = majorant_cli::run(&parsed, &source, &RunOptions { seed, workers, out })?;
            for row in &report.rows {
                if row.verdict != Verdict::Info {
                    let t = row.t.map(|t| format!(" T={t}")).unwrap_or_default();
                    let verdict = if row.verdict == Verdict::Pass { "PASS" } else { "FAIL" };
                    println!("{verdict} {}{t} {} = {} ({})", report.experiment, row.statistic, row.estimate, row.threshold);
                }
            }
            Ok(report.all_pass())
        }
        Command::EmitPlot { report, kind } => {
            let written = emit_plot(&report, kind)?;
            println!("{}", written.display());
            Ok(true)
        }
    }
}
