use super::{field::Field, multiplier::MultiplierSpec};
use crate::error::{Error, Result};

/// Discrete `L^p` norm `(Σ|f|^p Δx^d)^{1/p}`; `p = ∞` gives the max modulus.
pub fn lp_norm(f: &Field, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(f.max_modulus());
    }
    let cell = f.grid().cell_volume();
    let s: f64 = if p == 2.0 {
        f.values().iter().map(|v| v.norm_sqr()).sum()
    } else {
        f.values().iter().map(|v| v.norm().powf(p)).sum()
    };
    Ok((s * cell).powf(1.0 / p))
}

/// `Σ w(ξ)² |F(ξ)|² · Δx^d / n^d`, i.e. the squared L² norm of the multiplied field.
pub(crate) fn weighted_spectral_sq(f: &Field, weight: impl Fn(f64) -> f64) -> f64 {
    let grid = f.grid();
    let radii = grid.radii();
    let s: f64 = f.spectrum().iter().zip(&radii).map(|(c, &r)| {
        let w = weight(r);
        w * w * c.norm_sqr()
    })
    .sum();
    s * grid.cell_volume() / grid.len() as f64
}

/// Sobolev norm of order `γ`.
///
/// Inhomogeneous: `‖⟨Λ⟩^γ f‖_{L²}`. Homogeneous: `‖Λ^γ f‖_{L²}`; for `γ > 0`
/// the zero mode contributes nothing, for `γ < 0` the zero mode is excluded
/// and the field must have zero mean.
pub fn sobolev_norm(f: &Field, gamma: f64, homogeneous: bool) -> Result<f64> {
    if !gamma.is_finite() {
        return Err(Error::InvalidExponent(gamma));
    }
    if !homogeneous {
        if gamma == 0.0 {
            return lp_norm(f, 2.0);
        }
        return Ok(weighted_spectral_sq(f, |r| (1.0 + r * r).powf(0.5 * gamma)).sqrt());
    }
    if gamma < 0.0 {
        let mean = f.spectrum()[0];
        let tol = 1e-13 * f.spectrum().iter().map(|c| c.norm()).fold(0.0, f64::max);
        if mean.norm() > tol {
            return Err(Error::NonzeroMean);
        }
    }
    if gamma == 0.0 {
        return lp_norm(f, 2.0);
    }
    Ok(weighted_spectral_sq(f, |r| if r == 0.0 { 0.0 } else { r.powf(gamma) }).sqrt())
}

/// Mixed norm `‖u‖_{L^p_t L^q_x}` of a uniformly sampled trajectory.
///
/// Time integration is trapezoidal; `p = ∞` takes the max over snapshots.
/// A finite `p` needs at least two snapshots.
pub fn spacetime_norm(traj: &[Field], p: f64, q: f64, dt: f64) -> Result<f64> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let spatial: Vec<f64> = traj.iter().map(|f| lp_norm(f, q)).collect::<Result<_>>()?;
    time_norm(&spatial, p, dt)
}

/// `L^p` norm in time of sampled values (trapezoidal; max for `p = ∞`).
pub fn time_norm(spatial: &[f64], p: f64, dt: f64) -> Result<f64> {
    if spatial.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if p.is_infinite() {
        return Ok(spatial.iter().copied().fold(0.0, f64::max));
    }
    if spatial.len() < 2 {
        return Err(Error::EmptyTrajectory);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
    }
    // Normalise by the peak so large exponents do not overflow.
    let peak = spatial.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let vals: Vec<f64> = spatial.iter().map(|s| (s / peak).powf(p)).collect();
    let last = vals.len() - 1;
    let integral = dt * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[last]));
    Ok(peak * integral.powf(1.0 / p))
}

/// Convenience: `‖m(D) f‖_{L²}` computed spectrally.
pub fn multiplier_l2(f: &Field, m: &MultiplierSpec) -> Result<f64> {
    let w = m.sample(f.grid())?;
    let grid = f.grid();
    let s: f64 = f.spectrum().iter().zip(&w).map(|(c, &w)| w * w * c.norm_sqr()).sum();
    Ok((s * grid.cell_volume() / grid.len() as f64).sqrt())
}
