use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::linear_propagate;
use crate::littlewood_paley::{project, Band, Dyadic, is_empty_shell};
use crate::spectral::{lp_norm, Field};

/// Which factor of the product is conjugated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conjugation {
    /// `u v`
    None,
    /// `ū v`
    First,
    /// `u v̄`
    Second,
}

/// `‖(e^{itΛᵏ}P_{M₁}u₀)(e^{itΛᵏ}P_{M₂}v₀)‖_{L²_{t,x}([0,T])}` divided by
/// `(M₁/M₂)^{(d−1)/2} ‖P_{M₁}u₀‖_{L²} ‖P_{M₂}v₀‖_{L²}`.
///
/// The gain exponent uses the grid dimension `d`, which equals `k` in the
/// critical setting. Time integration is trapezoidal with step `Δt`.
pub fn bilinear_ratio(
    u0: &Field,
    v0: &Field,
    m1: Dyadic,
    m2: Dyadic,
    t: f64,
    dt: f64,
    conj: Conjugation,
) -> Result<f64> {
    if u0.grid() != v0.grid() {
        return Err(Error::GridMismatch);
    }
    if m1 > m2 {
        return Err(Error::InvalidParameter("bilinear ratio needs M1 <= M2".into()));
    }
    if !(t > 0.0 && dt > 0.0 && dt <= t) {
        return Err(Error::InvalidParameter(format!("need 0 < dt <= T, got dt = {dt}, T = {t}")));
    }
    let pu = project(u0, Band::Shell(m1))?;
    let pv = project(v0, Band::Shell(m2))?;
    let nu = lp_norm(&pu, 2.0)?;
    let nv = lp_norm(&pv, 2.0)?;
    for (n, whole) in [(nu, u0), (nv, v0)] {
        if is_empty_shell(n, lp_norm(whole, 2.0)?) {
            return Err(Error::EmptyShell { norm: n });
        }
    }
    let grid = *u0.grid();
    let cell = grid.cell_volume();
    let steps = (t / dt).round() as usize;
    let mut acc = 0.0;
    for j in 0..=steps {
        let tj = j as f64 * dt;
        let a = linear_propagate(&pu, tj);
        let b = linear_propagate(&pv, tj);
        let s: f64 = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| {
                let w: Complex64 = match conj {
                    Conjugation::None => x * y,
                    Conjugation::First => x.conj() * y,
                    Conjugation::Second => x * y.conj(),
                };
                w.norm_sqr()
            })
            .sum::<f64>()
            * cell;
        let weight = if j == 0 || j == steps { 0.5 } else { 1.0 };
        acc += weight * s;
    }
    let l2tx = (acc * dt).sqrt();
    let gain = (m1.value() / m2.value()).powf((grid.d() as f64 - 1.0) / 2.0);
    Ok(l2tx / (gain * nu * nv))
}
