use serde::Serialize;

use super::fit::SlopeFit;
use crate::error::{Error, Result};
use crate::evolution::{evolve, SolverConfig};
use crate::i_method::growth_exponent;
use crate::spectral::{sobolev_norm, Field};

/// `H^γ` norms along one trajectory and their growth fit in `1 + T`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    pub fit: Option<SlopeFit>,
    pub theoretical: f64,
    /// Time at which blow-up was suspected, if the run stopped early.
    pub aborted_at: Option<f64>,
}

/// Evolves `u₀` through the increasing times `t_values` and fits
/// `log ‖u(T)‖_{H^γ}` against `log(1 + T)`.
pub fn growth_experiment(
    u0: &Field,
    gamma: f64,
    k: u32,
    t_values: &[f64],
    cfg: &SolverConfig,
) -> Result<GrowthReport> {
    let theoretical = growth_exponent(k, gamma)?;
    if u0.grid().k() != k {
        return Err(Error::InvalidParameter("grid order differs from k".into()));
    }
    if t_values.len() < 3 || t_values.windows(2).any(|w| w[1] <= w[0]) || t_values[0] <= 0.0 {
        return Err(Error::InvalidParameter("need >= 3 increasing positive times".into()));
    }
    let mut times = Vec::new();
    let mut norms = Vec::new();
    let mut aborted_at = None;
    let mut state = u0.clone();
    let mut now = 0.0;
    for &t in t_values {
        let mut seg = cfg.clone();
        seg.horizon = t - now;
        seg.record_every = usize::MAX;
        match evolve(&state, &seg, &[]) {
            Ok(ev) => {
                state = ev.final_field;
                now += ev.final_time;
                times.push(t);
                norms.push(sobolev_norm(&state, gamma, false)?);
            }
            Err(Error::BlowUp { time }) => {
                aborted_at = Some(now + time);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let fit = if times.len() >= 3 && norms.iter().all(|&v| v > 0.0) {
        let x: Vec<f64> = times.iter().map(|t| 1.0 + t).collect();
        Some(SlopeFit::from_raw(&x, &norms)?)
    } else {
        None
    };
    Ok(GrowthReport { times, norms, fit, theoretical, aborted_at })
}
