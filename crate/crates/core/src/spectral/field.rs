use std::sync::OnceLock;

use num_complex::Complex64;

use super::{fft, grid::GridSpec};
use crate::error::{Error, Result};

/// Complex grid function on a [`GridSpec`].
///
/// Physical samples are authoritative. The unnormalised spectrum is computed
/// lazily on first use and cached; the cache is thread-safe, so a `Field` may
/// be shared read-only across threads.
#[derive(Clone, Debug)]
pub struct Field {
    grid: GridSpec,
    values: Vec<Complex64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values == other.values
    }
}

impl Field {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), found: values.len() });
        }
        Ok(Field { grid, values, spectrum: OnceLock::new() })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Field { grid, values: vec![Complex64::default(); grid.len()], spectrum: OnceLock::new() }
    }

    /// Samples `f(x)` at every grid point.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut values = vec![Complex64::default(); grid.len()];
        grid.for_each_point(|flat, x| values[flat] = f(x));
        Field { grid, values, spectrum: OnceLock::new() }
    }

    /// Builds a field from unnormalised spectral coefficients.
    pub fn from_spectrum(grid: GridSpec, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), found: spectrum.len() });
        }
        let mut values = spectrum.clone();
        fft::inverse(&grid, &mut values);
        let cache = OnceLock::new();
        let _ = cache.set(spectrum);
        Ok(Field { grid, values, spectrum: cache })
    }

    /// Exact lattice plane wave `A e^{iπ j·x/L}` for integer mode indices `j`.
    pub fn plane_wave(grid: GridSpec, modes: &[i64], amplitude: Complex64) -> Result<Self> {
        if modes.len() != grid.d() {
            return Err(Error::InvalidParameter(format!(
                "plane wave needs {} mode indices, got {}",
                grid.d(),
                modes.len()
            )));
        }
        let half = (grid.n() / 2) as i64;
        if modes.iter().any(|&j| j < -half || j >= half) {
            return Err(Error::InvalidParameter(format!("mode {modes:?} outside the lattice")));
        }
        let dxi = grid.dxi();
        Ok(Field::from_fn(grid, |x| {
            let phase: f64 = x.iter().zip(modes).map(|(xa, &j)| xa * j as f64 * dxi).sum();
            amplitude * Complex64::from_polar(1.0, phase)
        }))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Unnormalised DFT coefficients in FFT order (cached).
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| {
            let mut buf = self.values.clone();
            fft::forward(&self.grid, &mut buf);
            buf
        })
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::default())
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Field {
        Field::new(self.grid, self.values.iter().map(|v| v.conj()).collect()).expect("same length")
    }

    /// `c · f`.
    /// Multiplies by a constant; a cached spectrum is scaled along, so exact
    /// spectral zeros stay exact.
    pub fn scale(&self, c: Complex64) -> Field {
        let out = Field::new(self.grid, self.values.iter().map(|v| v * c).collect()).expect("same length");
        if let Some(s) = self.spectrum.get() {
            let _ = out.spectrum.set(s.iter().map(|v| v * c).collect());
        }
        out
    }

    fn zip_with(&self, other: &Field, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        Field::new(self.grid, values)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Field) -> Result<Field> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Discrete inner product `Σ conj(f) g Δx^d`.
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.cell_volume())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_is_a_single_lattice_mode() {
        let g = GridSpec::new(2, 2, 3.0, 16).unwrap();
        let f = Field::plane_wave(g, &[2, -3], Complex64::new(0.5, 0.0)).unwrap();
        let spec = f.spectrum();
        let mut nonzero = 0;
        for v in spec {
            if v.norm() > 1e-9 {
                nonzero += 1;
            }
        }
        assert_eq!(nonzero, 1);
        // slot (2, 16-3)
        assert!((spec[2 * 16 + 13].norm() - 0.5 * 256.0).abs() < 1e-9);
    }

    #[test]
    fn from_spectrum_round_trip() {
        let g = GridSpec::new(1, 3, 2.0, 32).unwrap();
        let f = Field::from_fn(g, |x| Complex64::new((-x[0] * x[0]).exp(), x[0].sin()));
        let h = Field::from_spectrum(g, f.spectrum().to_vec()).unwrap();
        for (a, b) in f.values().iter().zip(h.values()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_wrong_length() {
        let g = GridSpec::new(1, 3, 2.0, 8).unwrap();
        assert!(matches!(
            Field::new(g, vec![Complex64::default(); 7]),
            Err(Error::LengthMismatch { expected: 8, found: 7 })
        ));
    }
}
