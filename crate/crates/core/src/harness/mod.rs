//! Experiment harness: configuration, dispatch, persistence and plot data.
//!
//! This is the only part of the crate that writes files.

pub mod config;
pub mod data;
pub mod experiments;
pub mod plot;
pub mod record;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{ConfigError, ExperimentConfig, ExperimentName};
pub use data::{generate_initial_data, BumpProfile, DataSpec};
pub use record::{ExperimentRecord, RunStatus, Verdict, VerdictStatus};

use record::{num, Environment, Table, ARTIFACT_VERSION, SCHEMA_VERSION};

/// Environment variable overriding the configured output root.
pub const OUT_ENV: &str = "HOSLAB_OUT";

/// Failures that prevent a record from being written.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write to {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

/// Output root: `HOSLAB_OUT` if set, else `config.out`, else `results`.
pub fn output_root(cfg: &ExperimentConfig) -> PathBuf {
    std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("results"))
}

/// Run directory `<root>/<experiment>-seed<seed>-<hash>`.
pub fn run_dir(root: &Path, cfg: &ExperimentConfig) -> PathBuf {
    root.join(format!("{}-seed{}-{}", cfg.name, cfg.seed, cfg.hash()))
}

/// Validates `cfg`, runs the experiment on a pool of `cfg.jobs` workers and
/// writes the record, CSV tables and plot data under [`run_dir`].
///
/// A record is written even when the computation aborts; the returned record
/// carries the status. Only configuration and I/O problems return `Err`.
pub fn run(cfg: &ExperimentConfig, root: &Path) -> Result<(ExperimentRecord, PathBuf), HarnessError> {
    cfg.validate()?;
    let dir = run_dir(root, cfg);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    // Probe writability before spending time on the computation.
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(io_err(&probe))?;
    fs::remove_file(&probe).map_err(io_err(&probe))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    let start = Instant::now();
    log::info!("running {} (seed {}, hash {})", cfg.name, cfg.seed, cfg.hash());
    let result = pool.install(|| experiments::execute(cfg));
    let elapsed = start.elapsed().as_secs_f64();

    let mut record = ExperimentRecord {
        schema_version: SCHEMA_VERSION,
        experiment: cfg.name.to_string(),
        artifact_version: ARTIFACT_VERSION.to_string(),
        seed: cfg.seed,
        config_hash: cfg.hash(),
        half_period: cfg.grid.half_period(),
        config: cfg.clone(),
        measurements: serde_json::Value::Null,
        fits: Vec::new(),
        verdicts: Vec::new(),
        status: RunStatus::Abort,
        error: None,
        wall_clock_seconds: elapsed,
        environment: Environment::current(cfg.jobs),
        files: Vec::new(),
    };

    // Aggregation phase: all writes happen here, on this thread.
    match result {
        Ok(outcome) => {
            record.status = ExperimentRecord::status_of(&outcome.verdicts);
            for t in &outcome.tables {
                let name = format!("{}.csv", t.name);
                let path = dir.join(&name);
                fs::write(&path, t.to_csv()).map_err(io_err(&path))?;
                record.files.push(name);
            }
            for c in outcome.curves.iter().filter(|c| !c.points.is_empty()) {
                let mut t = Table::new(&format!("{}_fit", c.name), &["log_x", "log_y", "log_y_fit"]);
                for [x, y] in &c.points {
                    let fit = match (c.slope, c.intercept) {
                        (Some(s), Some(b)) => num(b + s * x),
                        _ => String::new(),
                    };
                    t.push([num(*x), num(*y), fit]);
                }
                let name = format!("{}.csv", t.name);
                let path = dir.join(&name);
                fs::write(&path, t.to_csv()).map_err(io_err(&path))?;
                record.files.push(name);
            }
            let (plots, skipped) = plot::plot_files(&outcome.curves);
            for (name, body) in plots {
                let path = dir.join(&name);
                fs::write(&path, body).map_err(io_err(&path))?;
                record.files.push(name);
            }
            for s in skipped {
                log::info!("skipped empty curve {s}");
            }
            record.measurements = outcome.measurements;
            record.fits = outcome.curves;
            record.verdicts = outcome.verdicts;
        }
        Err(e) => {
            log::error!("{} aborted: {e}", cfg.name);
            record.error = Some(e.to_string());
        }
    }
    let path = dir.join("record.json");
    let text = serde_json::to_string_pretty(&record).expect("record serialises");
    fs::write(&path, text + "\n").map_err(io_err(&path))?;
    Ok((record, dir))
}
