use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::i_method::{modified_energy, thresholds, to_f64, IOperatorSpec};
use crate::spectral::{sobolev_norm, Field};

/// Choice of scaling parameter `λ` and threshold `N` reaching a target time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescalingPlan {
    /// `T ∼ N^e` with `e = (2(γ₀+k)γ − k²)/(2γ)`.
    pub n_exponent: String,
    /// `λ ∼ N^a` with `a = (k/2 − γ)/γ`.
    pub lambda_exponent: String,
    pub n_threshold: f64,
    pub lambda: f64,
    pub c0: f64,
}

/// Exact exponent of `N` in `T ∼ N^{(2(γ₀+k)γ − k²)/(2γ)}`.
pub fn n_exponent(k: u32, gamma: Rational64) -> Result<Rational64> {
    let t = thresholds(k)?;
    let kr = Rational64::from_integer(k as i64);
    let two = Rational64::from_integer(2);
    if gamma <= t.gamma || gamma >= kr / two {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} must lie in ({}, {})",
            t.gamma,
            kr / two
        )));
    }
    Ok((two * (t.gamma0 + kr) * gamma - kr * kr) / (two * gamma))
}

/// Plans `λ = N^{(k/2−γ)/γ} (2C₀)^{1/(2γ)} (1 + ‖u₀‖_{H^γ})^{2/γ}` with `N`
/// chosen from `T = N^e`.
pub fn rescaling_plan(k: u32, gamma: Rational64, norm_bound: f64, t_target: f64, c0: f64) -> Result<RescalingPlan> {
    if t_target.is_nan() || t_target < 1.0 {
        return Err(Error::InvalidParameter(format!("target time {t_target} must be >= 1")));
    }
    if !(c0 > 0.0 && norm_bound >= 0.0) {
        return Err(Error::InvalidParameter("need C0 > 0 and a nonnegative norm bound".into()));
    }
    let e = n_exponent(k, gamma)?;
    let kr = Rational64::from_integer(k as i64);
    let a = (kr / Rational64::from_integer(2) - gamma) / gamma;
    let g = to_f64(gamma);
    let n = t_target.powf(1.0 / to_f64(e));
    let lambda = n.powf(to_f64(a)) * (2.0 * c0).powf(1.0 / (2.0 * g)) * (1.0 + norm_bound).powf(2.0 / g);
    Ok(RescalingPlan {
        n_exponent: e.to_string(),
        lambda_exponent: a.to_string(),
        n_threshold: n,
        lambda,
        c0,
    })
}

/// Empirical constant in `E(I_N u_λ) ≤ C₀ N^{2(k/2−γ)} λ^{−2γ} (1+‖u₀‖_{H^γ})⁴`,
/// taken as the largest ratio over the given `λ` values.
///
/// Uses `E(I_N u_λ) = λ^{−k} E(I_{λN} u₀)`, so no rescaled grid is needed.
pub fn measure_c0(u0: &Field, spec: &IOperatorSpec, lambdas: &[f64]) -> Result<f64> {
    let k = spec.k() as f64;
    let g = spec.gamma();
    let n = spec.threshold();
    let norm = sobolev_norm(u0, g, false)?;
    let mut worst = 0.0f64;
    for &lam in lambdas {
        let e = modified_energy(u0, &spec.with_threshold(lam * n)?).total * lam.powf(-k);
        let bound = n.powf(2.0 * (k / 2.0 - g)) * lam.powf(-2.0 * g) * (1.0 + norm).powi(4);
        worst = worst.max(e / bound);
    }
    Ok(worst)
}
