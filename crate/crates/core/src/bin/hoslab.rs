use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hoslab_core::harness::{self, ExperimentConfig, ExperimentName, RunStatus};

/// Numerical experiments for the higher-order cubic Schrödinger equation.
#[derive(Parser, Debug)]
#[command(name = "hoslab", version)]
struct Cli {
    /// Experiment to run: conserve, scaling, bernstein, strichartz, bilinear,
    /// xsb, duhamel, almost-conservation, growth or thresholds.
    experiment: String,
    /// JSON configuration file layered over the experiment defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration value, e.g. `--set grid.n=512`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output root directory (takes precedence over HOSLAB_OUT).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweep points.
    #[arg(long)]
    jobs: Option<usize>,
    /// Print the assembled configuration and exit.
    #[arg(long)]
    print_config: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();

    let cfg = match assemble(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("hoslab: {msg}");
            return ExitCode::from(2);
        }
    };
    if cli.print_config {
        println!("{}", serde_json::to_string_pretty(&cfg).expect("config serialises"));
        return ExitCode::SUCCESS;
    }
    let root = cli.out.clone().unwrap_or_else(|| harness::output_root(&cfg));
    match harness::run(&cfg, &root) {
        Ok((record, dir)) => {
            for v in &record.verdicts {
                println!("{:<12} {:<34} measured={:.4e} threshold={:.4e}", format!("{:?}", v.status), v.criterion, v.measured, v.threshold);
            }
            if let Some(e) = &record.error {
                println!("abort: {e}");
            }
            println!("record: {}", dir.join("record.json").display());
            match record.status {
                RunStatus::Pass => ExitCode::SUCCESS,
                RunStatus::Fail | RunStatus::Abort => ExitCode::from(1),
            }
        }
        Err(harness::HarnessError::Config(e)) => {
            eprintln!("hoslab: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("hoslab: {e}");
            ExitCode::from(2)
        }
    }
}

fn assemble(cli: &Cli) -> Result<ExperimentConfig, String> {
    let name: ExperimentName = cli.experiment.parse().map_err(|e: harness::ConfigError| e.to_string())?;
    let text = match &cli.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?),
        None => None,
    };
    let mut overrides = cli.set.clone();
    if let Some(j) = cli.jobs {
        overrides.push(format!("jobs={j}"));
    }
    ExperimentConfig::assemble(name, text.as_deref(), &overrides).map_err(|e| e.to_string())
}
