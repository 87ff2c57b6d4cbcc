use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::linear_propagate;
use crate::spectral::{lp_norm, time_norm, Field};

/// Literal admissibility test: `p, q ≥ 2`, `1/p + 1/q = 1/2` and
/// `(q, p) ≠ (2, ∞)`.
///
/// The last clause is applied exactly as written, so `(p, q) = (∞, 2)` is
/// rejected while `(2, ∞)` passes.
pub fn is_admissible(p: f64, q: f64) -> bool {
    if p.is_nan() || q.is_nan() || p < 2.0 || q < 2.0 {
        return false;
    }
    let s = 1.0 / p + 1.0 / q;
    (s - 0.5).abs() <= 1e-12 && !(q == 2.0 && p.is_infinite())
}

/// A Strichartz exponent pair `(p, q)` for `L^p_t L^q_x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub p: f64,
    pub q: f64,
}

impl AdmissiblePair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !is_admissible(p, q) {
            return Err(Error::InvalidParameter(format!("({p}, {q}) is not admissible")));
        }
        Ok(AdmissiblePair { p, q })
    }
}

/// `‖e^{itΛᵏ}f₀‖_{L^p_t L^q_x([0,T])} / ‖f₀‖_{L²}` with samples every `Δt`.
pub fn strichartz_ratio(f0: &Field, pair: AdmissiblePair, t: f64, dt: f64) -> Result<f64> {
    if f0.is_zero() {
        return Err(Error::ZeroField);
    }
    if !(t > 0.0 && dt > 0.0 && dt <= t) {
        return Err(Error::InvalidParameter(format!("need 0 < dt <= T, got dt = {dt}, T = {t}")));
    }
    let steps = (t / dt).round() as usize;
    let spatial: Vec<f64> = (0..=steps)
        .map(|j| lp_norm(&linear_propagate(f0, j as f64 * dt), pair.q))
        .collect::<Result<_>>()?;
    Ok(time_norm(&spatial, pair.p, dt)? / lp_norm(f0, 2.0)?)
}
