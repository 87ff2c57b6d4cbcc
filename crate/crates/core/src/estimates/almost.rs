use serde::Serialize;

use super::fit::SlopeFit;
use crate::error::{Error, Result};
use crate::evolution::{evolve, SolverConfig};
use crate::i_method::{modified_energy, IOperatorSpec};
use crate::spectral::Field;

/// Increments below this are indistinguishable from roundoff.
pub const MEASUREMENT_FLOOR: f64 = 1e-14;

/// Outcome of an almost-conservation sweep over thresholds `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostConservationReport {
    pub thresholds: Vec<f64>,
    /// `E(I_N u₀)` for each threshold.
    pub initial_energy: Vec<f64>,
    /// `sup_{t ≤ δ} |E(I_N u(t)) − E(I_N u₀)|` for each threshold.
    pub increments: Vec<f64>,
    /// Thresholds dropped from the fit, with the reason.
    pub excluded: Vec<(f64, String)>,
    /// Log-log fit of increment against `N` over the retained points.
    pub fit: Option<SlopeFit>,
}

/// Evolves `u₀` over `[0, δ_run]` once, tracking `E(I_N u)` for every `N`,
/// and fits the decay of the increments in `N`.
pub fn almost_conservation_experiment(
    u0: &Field,
    gamma: f64,
    thresholds: &[f64],
    delta_run: f64,
    cfg: &SolverConfig,
) -> Result<AlmostConservationReport> {
    if thresholds.is_empty() {
        return Err(Error::InvalidParameter("threshold sweep is empty".into()));
    }
    let k = u0.grid().k();
    let specs: Vec<IOperatorSpec> =
        thresholds.iter().map(|&n| IOperatorSpec::new(n, gamma, k)).collect::<Result<_>>()?;
    let mut run = cfg.clone();
    run.horizon = delta_run;
    let ev = evolve(u0, &run, &specs)?;

    let initial_energy: Vec<f64> = specs.iter().map(|s| modified_energy(u0, s).total).collect();
    let increments: Vec<f64> = (0..specs.len()).map(|j| ev.trace.modified_increment(j)).collect();
    let mut excluded = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&n, &inc) in thresholds.iter().zip(&increments) {
        if inc < MEASUREMENT_FLOOR {
            log::warn!("increment {inc:e} at N = {n} is below the measurement floor; excluded");
            excluded.push((n, format!("increment {inc:e} below measurement floor {MEASUREMENT_FLOOR:e}")));
        } else {
            xs.push(n);
            ys.push(inc);
        }
    }
    let fit = if xs.len() >= 3 { Some(SlopeFit::from_raw(&xs, &ys)?) } else { None };
    Ok(AlmostConservationReport { thresholds: thresholds.to_vec(), initial_energy, increments, excluded, fit })
}

/// Largest relative change of the increments between two resolutions.
pub fn refinement_change(coarse: &AlmostConservationReport, fine: &AlmostConservationReport) -> f64 {
    coarse
        .increments
        .iter()
        .zip(&fine.increments)
        .map(|(a, b)| ((a - b) / b).abs())
        .fold(0.0, f64::max)
}
