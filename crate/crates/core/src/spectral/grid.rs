use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry of the periodic box `[−L, L)^d` sampled with `n` points per axis.
///
/// Grid points are `x_j = −L + jΔx` with `Δx = 2L/n`; the frequency lattice is
/// `{πj/L : j ∈ [−n/2, n/2)}^d`, stored in FFT order along each axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct GridSpec {
    d: usize,
    k: u32,
    half_period: f64,
    n: usize,
}

#[derive(Serialize, Deserialize)]
struct RawGrid {
    d: usize,
    k: u32,
    half_period: f64,
    n: usize,
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        GridSpec::new(r.d, r.k, r.half_period, r.n)
    }
}

impl From<GridSpec> for RawGrid {
    fn from(g: GridSpec) -> Self {
        RawGrid { d: g.d, k: g.k, half_period: g.half_period, n: g.n }
    }
}

impl GridSpec {
    pub fn new(d: usize, k: u32, half_period: f64, n: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if k < 2 {
            return Err(Error::InvalidGrid(format!("dispersion order {k} < 2")));
        }
        if !(half_period.is_finite() && half_period > 0.0) {
            return Err(Error::InvalidGrid(format!("half period {half_period} must be positive")));
        }
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} must be a power of two ≥ 4")));
        }
        if n.checked_pow(d as u32).is_none() {
            return Err(Error::InvalidGrid("n^d overflows".into()));
        }
        Ok(GridSpec { d, k, half_period, n })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of grid points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_period / self.n as f64
    }

    /// Cell volume `Δx^d` used by every quadrature.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.d as i32)
    }

    /// Box volume `(2L)^d`.
    pub fn volume(&self) -> f64 {
        (2.0 * self.half_period).powi(self.d as i32)
    }

    /// Largest lattice frequency magnitude along one axis, `πn/(2L)`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / (2.0 * self.half_period)
    }

    /// Lattice spacing in frequency, `π/L`.
    pub fn dxi(&self) -> f64 {
        PI / self.half_period
    }

    /// True when the dimension matches the dispersion order (the critical setting).
    pub fn is_critical(&self) -> bool {
        self.d == self.k as usize
    }

    pub fn require_critical(&self) -> Result<()> {
        if self.is_critical() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { d: self.d, k: self.k })
        }
    }

    /// Same geometry with a different box size.
    pub fn with_half_period(&self, half_period: f64) -> Result<Self> {
        GridSpec::new(self.d, self.k, half_period, self.n)
    }

    /// Same geometry with a different resolution.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        GridSpec::new(self.d, self.k, self.half_period, n)
    }

    /// Signed integer mode index of FFT slot `i`, in `[−n/2, n/2)`.
    pub fn mode_index(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Axis frequencies `πj/L` in FFT order.
    pub fn axis_frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.mode_index(i) as f64 * self.dxi()).collect()
    }

    /// Axis coordinates `−L + jΔx`.
    pub fn axis_points(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|j| -self.half_period + j as f64 * dx).collect()
    }

    /// Calls `f(flat_index, multi_index)` for every grid slot in row-major order.
    pub fn for_each_index(&self, mut f: impl FnMut(usize, &[usize])) {
        let mut idx = vec![0usize; self.d];
        for flat in 0..self.len() {
            f(flat, &idx);
            for a in (0..self.d).rev() {
                idx[a] += 1;
                if idx[a] < self.n {
                    break;
                }
                idx[a] = 0;
            }
        }
    }

    /// Calls `f(flat_index, ξ)` for every lattice frequency, in the same
    /// order as the spectral coefficients.
    pub fn for_each_frequency(&self, mut f: impl FnMut(usize, &[f64])) {
        let axis = self.axis_frequencies();
        let mut xi = vec![0.0; self.d];
        self.for_each_index(|flat, idx| {
            for (a, &i) in idx.iter().enumerate() {
                xi[a] = axis[i];
            }
            f(flat, &xi);
        });
    }

    /// Calls `f(flat_index, x)` for every physical grid point.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[f64])) {
        let axis = self.axis_points();
        let mut x = vec![0.0; self.d];
        self.for_each_index(|flat, idx| {
            for (a, &i) in idx.iter().enumerate() {
                x[a] = axis[i];
            }
            f(flat, &x);
        });
    }

    /// `|ξ|` for every spectral slot.
    pub fn radii(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.for_each_frequency(|flat, xi| {
            out[flat] = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        });
        out
    }

    /// Mask of the 2/3 rule: keeps slots whose every axis index satisfies `|j| ≤ n/3`.
    pub fn dealias_mask(&self) -> Vec<bool> {
        let cut = (self.n / 3) as i64;
        let mut out = vec![false; self.len()];
        self.for_each_index(|flat, idx| {
            out[flat] = idx.iter().all(|&i| self.mode_index(i).abs() <= cut);
        });
        out
    }
}
