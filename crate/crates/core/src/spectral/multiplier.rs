use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{field::Field, grid::GridSpec};
use crate::error::{Error, Result};

type RadialFn = dyn Fn(f64) -> f64 + Send + Sync;
type VectorFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

#[derive(Clone)]
enum Symbol {
    Radial(Arc<RadialFn>),
    Vector(Arc<VectorFn>),
}

/// Real Fourier symbol sampled on lattice frequencies.
#[derive(Clone)]
pub struct MultiplierSpec {
    symbol: Symbol,
    label: String,
}

impl fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.symbol {
            Symbol::Radial(_) => "radial",
            Symbol::Vector(_) => "general",
        };
        f.debug_struct("MultiplierSpec").field("label", &self.label).field("kind", &kind).finish()
    }
}

impl MultiplierSpec {
    /// Symbol depending only on `|ξ|`.
    pub fn radial(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        MultiplierSpec { symbol: Symbol::Radial(Arc::new(f)), label: label.into() }
    }

    /// Symbol depending on the full frequency vector.
    pub fn general(label: impl Into<String>, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        MultiplierSpec { symbol: Symbol::Vector(Arc::new(f)), label: label.into() }
    }

    pub fn identity() -> Self {
        Self::radial("1", |_| 1.0)
    }

    /// `|ξ|^a`. For `a < 0` the zero mode is infinite and application fails.
    pub fn power(a: f64) -> Self {
        Self::radial(format!("|xi|^{a}"), move |r| if a == 0.0 { 1.0 } else { r.powf(a) })
    }

    /// `|ξ|^a` with the zero mode mapped to 0 (for negative orders).
    pub fn power_nonzero(a: f64) -> Self {
        Self::radial(format!("|xi|^{a} (zero mode removed)"), move |r| {
            if r == 0.0 {
                if a == 0.0 { 1.0 } else { 0.0 }
            } else {
                r.powf(a)
            }
        })
    }

    /// Japanese bracket power `⟨ξ⟩^g = (1 + |ξ|²)^{g/2}`.
    pub fn bracket(g: f64) -> Self {
        Self::radial(format!("<xi>^{g}"), move |r| (1.0 + r * r).powf(0.5 * g))
    }

    /// Pointwise product of two symbols.
    pub fn product(&self, other: &MultiplierSpec) -> MultiplierSpec {
        let label = format!("({})*({})", self.label, other.label);
        match (&self.symbol, &other.symbol) {
            (Symbol::Radial(a), Symbol::Radial(b)) => {
                let (a, b) = (a.clone(), b.clone());
                Self::radial(label, move |r| a(r) * b(r))
            }
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Self::general(label, move |xi| a.eval(xi) * b.eval(xi))
            }
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.symbol, Symbol::Radial(_))
    }

    /// Symbol value at frequency vector `ξ`.
    pub fn eval(&self, xi: &[f64]) -> f64 {
        match &self.symbol {
            Symbol::Radial(f) => f(xi.iter().map(|v| v * v).sum::<f64>().sqrt()),
            Symbol::Vector(f) => f(xi),
        }
    }

    /// Symbol values on every spectral slot of `grid`.
    pub fn sample(&self, grid: &GridSpec) -> Result<Vec<f64>> {
        let mut out = vec![0.0; grid.len()];
        let mut bad: Option<Vec<f64>> = None;
        grid.for_each_frequency(|flat, xi| {
            let v = self.eval(xi);
            if !v.is_finite() && bad.is_none() {
                bad = Some(xi.to_vec());
            }
            out[flat] = v;
        });
        match bad {
            Some(frequency) => Err(Error::NonFiniteSymbol { label: self.label.clone(), frequency }),
            None => Ok(out),
        }
    }

    /// Largest deviation of the symbol under axis sign flips and cyclic axis
    /// permutations over the lattice; zero for a radial symbol.
    pub fn radial_defect(&self, grid: &GridSpec) -> f64 {
        let d = grid.d();
        let mut worst = 0.0f64;
        let mut buf = vec![0.0; d];
        grid.for_each_frequency(|_, xi| {
            let base = self.eval(xi);
            for shift in 0..d {
                for signs in 0..(1u32 << d) {
                    for a in 0..d {
                        let v = xi[(a + shift) % d];
                        buf[a] = if signs & (1 << a) != 0 { -v } else { v };
                    }
                    let v = self.eval(&buf);
                    let scale = base.abs().max(1.0);
                    worst = worst.max((v - base).abs() / scale);
                }
            }
        });
        worst
    }
}

/// Multiplies the spectrum of `f` by precomputed symbol samples.
///
/// When every sample on the support of the spectrum is exactly 1 the input is
/// returned unchanged, so identity multipliers are bit-exact.
pub fn apply_weights(f: &Field, weights: &[f64]) -> Field {
    let spec = f.spectrum();
    debug_assert_eq!(spec.len(), weights.len());
    let identity = spec.iter().zip(weights).all(|(c, &w)| w == 1.0 || *c == Complex64::default());
    if identity {
        return f.clone();
    }
    let scaled: Vec<Complex64> = spec.iter().zip(weights).map(|(c, &w)| c * w).collect();
    Field::from_spectrum(*f.grid(), scaled).expect("same grid")
}

/// Applies the Fourier multiplier `m` to `f`.
pub fn apply_multiplier(f: &Field, m: &MultiplierSpec) -> Result<Field> {
    let w = m.sample(f.grid())?;
    Ok(apply_weights(f, &w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenmode_scaling() {
        let g = GridSpec::new(1, 3, 5.0, 32).unwrap();
        let f = Field::plane_wave(g, &[3], Complex64::new(1.0, 0.0)).unwrap();
        let xi0 = 3.0 * g.dxi();
        let h = apply_multiplier(&f, &MultiplierSpec::power(3.0)).unwrap();
        for (a, b) in h.values().iter().zip(f.values()) {
            assert!((a - b * xi0.powi(3)).norm() < 1e-11);
        }
    }

    #[test]
    fn identity_is_exact() {
        let g = GridSpec::new(2, 2, 1.0, 8).unwrap();
        let f = Field::from_fn(g, |x| Complex64::new(x[0].cos(), x[1]));
        let h = apply_multiplier(&f, &MultiplierSpec::identity()).unwrap();
        assert_eq!(h, f);
    }

    #[test]
    fn non_finite_symbol_reports_frequency() {
        let g = GridSpec::new(1, 3, 1.0, 8).unwrap();
        let f = Field::from_fn(g, |_| Complex64::new(1.0, 0.0));
        let err = apply_multiplier(&f, &MultiplierSpec::power(-1.0)).unwrap_err();
        match err {
            Error::NonFiniteSymbol { frequency, .. } => assert_eq!(frequency, vec![0.0]),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn radial_defect_detects_anisotropy() {
        let g = GridSpec::new(2, 2, 1.0, 8).unwrap();
        assert_eq!(MultiplierSpec::bracket(1.5).radial_defect(&g), 0.0);
        let aniso = MultiplierSpec::general("xi_0", |xi| xi[0]);
        assert!(aniso.radial_defect(&g) > 0.1);
    }
}
