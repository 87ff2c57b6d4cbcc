use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact regularity exponents attached to a dispersion order `k ≥ 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thresholds {
    pub k: i64,
    /// Global well-posedness threshold `γ(k) = k(4k−1)/(14k−3)`.
    pub gamma: Rational64,
    /// Almost-conservation decay exponent `γ₀(k) = k(6k−1)/(8k−2)`.
    pub gamma0: Rational64,
    /// Auxiliary weight exponent `α(k) = k(2k−1)/(8k−2)`.
    pub alpha: Rational64,
}

/// Serialisable view with both exact strings and float conversions.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdsReport {
    pub k: i64,
    pub gamma: String,
    pub gamma0: String,
    pub alpha: String,
    pub gamma_f64: f64,
    pub gamma0_f64: f64,
    pub alpha_f64: f64,
}

pub fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn thresholds(k: u32) -> Result<Thresholds> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("thresholds need k >= 3, got {k}")));
    }
    let k = k as i64;
    Ok(Thresholds {
        k,
        gamma: Rational64::new(k * (4 * k - 1), 14 * k - 3),
        gamma0: Rational64::new(k * (6 * k - 1), 8 * k - 2),
        alpha: Rational64::new(k * (2 * k - 1), 8 * k - 2),
    })
}

impl Thresholds {
    pub fn report(&self) -> ThresholdsReport {
        ThresholdsReport {
            k: self.k,
            gamma: self.gamma.to_string(),
            gamma0: self.gamma0.to_string(),
            alpha: self.alpha.to_string(),
            gamma_f64: to_f64(self.gamma),
            gamma0_f64: to_f64(self.gamma0),
            alpha_f64: to_f64(self.alpha),
        }
    }
}

/// Growth exponent `(4k−1)(k−2γ) / (2((14k−3)γ − k(4k−1)))` of the
/// `H^γ` bound, defined for `γ(k) < γ < k/2`.
pub fn growth_exponent(k: u32, gamma: f64) -> Result<f64> {
    let t = thresholds(k)?;
    let kf = k as f64;
    if !(gamma > to_f64(t.gamma) && gamma < kf / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} outside ({}, {})",
            t.gamma,
            kf / 2.0
        )));
    }
    let num = (4.0 * kf - 1.0) * (kf - 2.0 * gamma);
    let den = 2.0 * ((14.0 * kf - 3.0) * gamma - kf * (4.0 * kf - 1.0));
    Ok(num / den)
}

/// The same exponent in exact arithmetic.
pub fn growth_exponent_exact(k: u32, gamma: Rational64) -> Result<Rational64> {
    let t = thresholds(k)?;
    let kr = Rational64::from_integer(k as i64);
    let two = Rational64::from_integer(2);
    if !(gamma > t.gamma && gamma < kr / two) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} outside ({}, {})", t.gamma, kr / two)));
    }
    let four_k_minus_1 = Rational64::from_integer(4 * k as i64 - 1);
    let num = four_k_minus_1 * (kr - two * gamma);
    let den = two * (Rational64::from_integer(14 * k as i64 - 3) * gamma - kr * four_k_minus_1);
    Ok(num / den)
}
