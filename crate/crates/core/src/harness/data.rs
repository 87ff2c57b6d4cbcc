//! Deterministic initial data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::spectral::{lp_norm, Field, GridSpec};

/// Radial profile of one bump, as a function of `ρ = |x − c|/w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpProfile {
    /// `e^{−ρ²/2}`
    Gaussian,
    /// `(1 + ρ) e^{−ρ}`: a `C²` profile whose spectrum decays like `|ξ|^{−4}`
    /// in one dimension, giving slowly decaying high-frequency content.
    Exponential,
}

impl BumpProfile {
    fn eval(self, rho: f64) -> f64 {
        match self {
            BumpProfile::Gaussian => (-0.5 * rho * rho).exp(),
            BumpProfile::Exponential => (1.0 + rho) * (-rho).exp(),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_bumps() -> usize {
    1
}

fn default_profile() -> BumpProfile {
    BumpProfile::Gaussian
}

/// Initial-data generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DataSpec {
    /// `A exp(−|x|²/(2w²))` centred at the origin.
    Gaussian {
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
    },
    /// Sum of bumps of amplitude `A` and width `w`. A single bump sits at the
    /// origin; several bumps get seeded centres in `[−L/4, L/4]^d` and seeded
    /// unit phases.
    MultiBump {
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default = "default_bumps")]
        count: usize,
        #[serde(default = "default_profile")]
        profile: BumpProfile,
    },
    /// Random Fourier series `Σ c_j e^{iξ_j·x}` over lattice modes with
    /// `|ξ_j| ≤ cutoff`, `c_j` complex normal times `⟨ξ_j⟩^{−decay}`,
    /// optionally multiplied by the envelope `exp(−|x|²/(2e²))`, then scaled
    /// to `L²` norm `A`. Coefficients are drawn in a fixed mode order so the
    /// field does not depend on `n` once `cutoff` is resolved.
    ShellRandom {
        amplitude: f64,
        cutoff: f64,
        #[serde(default)]
        decay: f64,
        #[serde(default)]
        envelope: Option<f64>,
    },
    /// Exact lattice plane wave `A e^{iπ j·x/L}`.
    SingleMode { amplitude: f64, modes: Vec<i64> },
    /// Identically zero field (a control; it has no amplitude).
    Zero,
}

impl DataSpec {
    pub fn amplitude(&self) -> f64 {
        match self {
            DataSpec::Gaussian { amplitude, .. }
            | DataSpec::MultiBump { amplitude, .. }
            | DataSpec::ShellRandom { amplitude, .. }
            | DataSpec::SingleMode { amplitude, .. } => *amplitude,
            DataSpec::Zero => 0.0,
        }
    }

    pub fn with_amplitude(&self, a: f64) -> DataSpec {
        let mut out = self.clone();
        match &mut out {
            DataSpec::Gaussian { amplitude, .. }
            | DataSpec::MultiBump { amplitude, .. }
            | DataSpec::ShellRandom { amplitude, .. }
            | DataSpec::SingleMode { amplitude, .. } => *amplitude = a,
            DataSpec::Zero => {}
        }
        out
    }
}

/// Builds the initial field described by `spec` on `grid`.
pub fn generate_initial_data(spec: &DataSpec, grid: &GridSpec, seed: u64) -> Result<Field> {
    if let DataSpec::Zero = spec {
        return Ok(Field::zeros(*grid));
    }
    let a = spec.amplitude();
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!("amplitude {a} must be positive")));
    }
    match spec {
        DataSpec::Gaussian { width, .. } => {
            check_width(*width)?;
            let w2 = width * width;
            Ok(Field::from_fn(*grid, |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                Complex64::new(a * (-0.5 * r2 / w2).exp(), 0.0)
            }))
        }
        DataSpec::MultiBump { width, count, profile, .. } => {
            check_width(*width)?;
            if *count == 0 {
                return Err(Error::InvalidParameter("multi-bump needs at least one bump".into()));
            }
            let d = grid.d();
            let mut rng = Rng::new(seed);
            let quarter = grid.half_period() / 2.0;
            let bumps: Vec<(Vec<f64>, Complex64)> = (0..*count)
                .map(|_| {
                    if *count == 1 {
                        (vec![0.0; d], Complex64::new(1.0, 0.0))
                    } else {
                        let c = (0..d).map(|_| quarter * (2.0 * rng.uniform() - 1.0)).collect();
                        let ph = Complex64::from_polar(1.0, std::f64::consts::TAU * rng.uniform());
                        (c, ph)
                    }
                })
                .collect();
            Ok(Field::from_fn(*grid, |x| {
                bumps
                    .iter()
                    .map(|(c, ph)| {
                        let r2: f64 = x.iter().zip(c).map(|(xa, ca)| (xa - ca) * (xa - ca)).sum();
                        ph * (a * profile.eval(r2.sqrt() / width))
                    })
                    .sum()
            }))
        }
        DataSpec::ShellRandom { cutoff, decay, envelope, .. } => {
            shell_random(grid, seed, a, *cutoff, *decay, *envelope)
        }
        DataSpec::SingleMode { modes, .. } => Field::plane_wave(*grid, modes, Complex64::new(a, 0.0)),
        DataSpec::Zero => unreachable!("handled above"),
    }
}

fn check_width(w: f64) -> Result<()> {
    if w.is_finite() && w > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("width {w} must be positive")))
    }
}

fn shell_random(
    grid: &GridSpec,
    seed: u64,
    amplitude: f64,
    cutoff: f64,
    decay: f64,
    envelope: Option<f64>,
) -> Result<Field> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Error::InvalidParameter(format!("cutoff {cutoff} must be positive")));
    }
    if let Some(e) = envelope {
        check_width(e)?;
    }
    let d = grid.d();
    let dxi = grid.dxi();
    let half = (grid.n() / 2) as i64;
    // Cutoffs beyond the grid select every lattice mode.
    let jmax = (cutoff / dxi).floor().min(half as f64) as i64;
    let n = grid.n();
    let mut rng = Rng::new(seed);
    let mut spec = vec![Complex64::default(); grid.len()];
    // Canonical order: row-major over the box [−jmax, jmax]^d.
    let side = (2 * jmax + 1) as usize;
    let total = side.pow(d as u32);
    let mut j = vec![0i64; d];
    for idx in 0..total {
        let mut rem = idx;
        for a in (0..d).rev() {
            j[a] = (rem % side) as i64 - jmax;
            rem /= side;
        }
        let c = rng.complex_normal();
        let r = dxi * (j.iter().map(|v| (v * v) as f64).sum::<f64>()).sqrt();
        if r > cutoff || j.iter().any(|&v| v < -half || v >= half) {
            continue;
        }
        let flat = j.iter().fold(0usize, |acc, &v| acc * n + v.rem_euclid(n as i64) as usize);
        spec[flat] = c * (1.0 + r * r).powf(-0.5 * decay);
    }
    let mut f = Field::from_spectrum(*grid, spec)?;
    if let Some(e) = envelope {
        let e2 = e * e;
        let env = Field::from_fn(*grid, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            Complex64::new((-0.5 * r2 / e2).exp(), 0.0)
        });
        f = f.mul(&env)?;
    }
    let norm = lp_norm(&f, 2.0)?;
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(f.scale(Complex64::new(amplitude / norm, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_mass_closed_form() {
        let g = GridSpec::new(1, 3, 16.0, 256).unwrap();
        let f = generate_initial_data(&DataSpec::Gaussian { amplitude: 1.3, width: 1.0 }, &g, 0).unwrap();
        let mass = lp_norm(&f, 2.0).unwrap().powi(2);
        let want = 1.3f64.powi(2) * std::f64::consts::PI.sqrt();
        assert!((mass - want).abs() < 1e-8 * want);
    }

    #[test]
    fn rejects_nonpositive_amplitude() {
        let g = GridSpec::new(1, 3, 16.0, 64).unwrap();
        assert!(generate_initial_data(&DataSpec::Gaussian { amplitude: 0.0, width: 1.0 }, &g, 0).is_err());
    }

    #[test]
    fn shell_random_is_seeded_and_resolution_independent() {
        let spec = DataSpec::ShellRandom { amplitude: 1.0, cutoff: 3.0, decay: 1.0, envelope: None };
        let g1 = GridSpec::new(1, 3, 8.0, 64).unwrap();
        let g2 = g1.with_n(128).unwrap();
        let a = generate_initial_data(&spec, &g1, 9).unwrap();
        let b = generate_initial_data(&spec, &g1, 9).unwrap();
        assert_eq!(a, b);
        let c = generate_initial_data(&spec, &g2, 9).unwrap();
        // Every other sample of the fine field is the coarse field.
        for (i, v) in a.values().iter().enumerate() {
            assert!((v - c.values()[2 * i]).norm() < 1e-12);
        }
        assert_ne!(a, generate_initial_data(&spec, &g1, 10).unwrap());
    }

    #[test]
    fn single_mode_is_plane_wave() {
        let g = GridSpec::new(2, 2, 4.0, 16).unwrap();
        let f = generate_initial_data(&DataSpec::SingleMode { amplitude: 2.0, modes: vec![1, -2] }, &g, 0).unwrap();
        assert_eq!(f, Field::plane_wave(g, &[1, -2], Complex64::new(2.0, 0.0)).unwrap());
    }

    #[test]
    fn multi_bump_seeded() {
        let g = GridSpec::new(1, 3, 16.0, 128).unwrap();
        let spec = DataSpec::MultiBump { amplitude: 1.0, width: 0.5, count: 3, profile: BumpProfile::Exponential };
        assert_eq!(generate_initial_data(&spec, &g, 4).unwrap(), generate_initial_data(&spec, &g, 4).unwrap());
    }
}
