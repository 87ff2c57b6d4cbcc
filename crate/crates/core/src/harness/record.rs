//! Run records and tabular outputs.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::ExperimentConfig;
use crate::estimates::SlopeFit;

/// Version of the record layout; bump on breaking changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Crate version stamped into every record.
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    /// Reported for information; never affects the exit code.
    ReportOnly,
}

/// Outcome of one named criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    /// Criterion name, e.g. `mass-conservation`.
    pub criterion: String,
    pub status: VerdictStatus,
    pub measured: f64,
    /// Bound the measurement is compared against.
    pub threshold: f64,
    pub detail: String,
}

impl Verdict {
    /// Passes when `measured <= threshold`.
    pub fn at_most(criterion: &str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self::decide(criterion, measured <= threshold, measured, threshold, detail)
    }

    /// Passes when `measured >= threshold`.
    pub fn at_least(criterion: &str, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self::decide(criterion, measured >= threshold, measured, threshold, detail)
    }

    pub fn decide(criterion: &str, ok: bool, measured: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Verdict {
            criterion: criterion.to_string(),
            status: if ok { VerdictStatus::Pass } else { VerdictStatus::Fail },
            measured,
            threshold,
            detail: detail.into(),
        }
    }

    pub fn report_only(mut self) -> Self {
        self.status = VerdictStatus::ReportOnly;
        self
    }
}

/// A point left out of a fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Excluded {
    pub x: f64,
    pub reason: String,
}

/// A named log-log curve with its optional fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    /// `(log x, log y)` pairs used by the fit.
    pub points: Vec<[f64; 2]>,
    pub excluded: Vec<Excluded>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub residual_rms: Option<f64>,
}

impl Curve {
    pub fn new(name: &str, x_label: &str, y_label: &str) -> Self {
        Curve {
            name: name.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            points: Vec::new(),
            excluded: Vec::new(),
            slope: None,
            intercept: None,
            residual_rms: None,
        }
    }

    /// Curve whose points and line come from `fit`.
    pub fn from_fit(name: &str, x_label: &str, y_label: &str, fit: &SlopeFit) -> Self {
        let mut c = Curve::new(name, x_label, y_label);
        c.points = fit.log_x.iter().zip(&fit.log_y).map(|(&a, &b)| [a, b]).collect();
        c.slope = Some(fit.slope);
        c.intercept = Some(fit.intercept);
        c.residual_rms = Some(fit.residual_rms);
        c
    }
}

/// CSV table: header plus rows of already formatted cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    /// File stem; the table is written to `<name>.csv`.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I, T>(&mut self, row: I)
    where
        I: IntoIterator<Item = T>,
        T: ToString,
    {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    /// Comma-separated, `.` decimals, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

/// Everything an experiment produced, before persistence.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub measurements: Value,
    pub tables: Vec<Table>,
    pub curves: Vec<Curve>,
    pub verdicts: Vec<Verdict>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Pass,
    Fail,
    /// The computation stopped with an error; see `error`.
    Abort,
}

/// Where a record was produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub os: String,
    pub arch: String,
    /// Worker threads used for sweep points.
    pub jobs: usize,
}

impl Environment {
    pub fn current(jobs: usize) -> Self {
        Environment { os: std::env::consts::OS.into(), arch: std::env::consts::ARCH.into(), jobs }
    }
}

/// Persisted summary of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub experiment: String,
    pub artifact_version: String,
    pub seed: u64,
    pub config_hash: String,
    /// Torus half period `L`, repeated here because torus results depend on it.
    pub half_period: f64,
    pub config: ExperimentConfig,
    pub measurements: Value,
    pub fits: Vec<Curve>,
    pub verdicts: Vec<Verdict>,
    pub status: RunStatus,
    pub error: Option<String>,
    pub wall_clock_seconds: f64,
    pub environment: Environment,
    /// Files written next to the record, relative to the run directory.
    pub files: Vec<String>,
}

impl ExperimentRecord {
    /// Status implied by the verdicts (report-only ones are ignored).
    pub fn status_of(verdicts: &[Verdict]) -> RunStatus {
        if verdicts.iter().any(|v| v.status == VerdictStatus::Fail) {
            RunStatus::Fail
        } else {
            RunStatus::Pass
        }
    }
}

/// Formats `f64` cells: shortest round-trip representation, `inf`/`nan` spelled out.
pub fn num(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_lf_and_header() {
        let mut t = Table::new("x", &["a", "b"]);
        t.push([num(0.5), num(1e-20)]);
        assert_eq!(t.to_csv(), "a,b\n0.5,0.00000000000000000001\n");
    }

    #[test]
    fn status_ignores_report_only() {
        let v = vec![
            Verdict::at_most("a", 1.0, 2.0, ""),
            Verdict::at_most("b", 3.0, 2.0, "").report_only(),
        ];
        assert_eq!(ExperimentRecord::status_of(&v), RunStatus::Pass);
        let v = vec![Verdict::at_least("c", 1.0, 2.0, "")];
        assert_eq!(ExperimentRecord::status_of(&v), RunStatus::Fail);
    }
}
