//! Smooth dyadic frequency projections and Bernstein-inequality ratios.
//!
//! The base cutoff is `φ(r) = 1` for `r ≤ 1`, `φ(r) = 0` for `r ≥ 2` and
//! `φ(r) = s(2 − r)` in between, with the smooth step
//! `s(t) = g(t) / (g(t) + g(1 − t))`, `g(t) = e^{−1/t}` for `t > 0`.
//! Shells are `ψ_M(r) = φ(r/M) − φ(2r/M)`, except `P₁ := P_{≤1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{apply_multiplier, lp_norm, Field, MultiplierSpec};

fn g(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// `C^∞` step rising from 0 at `t ≤ 0` to 1 at `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = g(t);
        a / (a + g(1.0 - t))
    }
}

/// Base cutoff `φ`.
pub fn phi(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        smooth_step(2.0 - r)
    }
}

/// Shell profile `ψ_M(r) = φ(r/M) − φ(2r/M)` (no `P₁` convention applied).
pub fn psi(m: f64, r: f64) -> f64 {
    phi(r / m) - phi(2.0 * r / m)
}

/// Dyadic number `2^j`, `j ∈ ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Dyadic(f64);

impl Dyadic {
    pub fn new(m: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidParameter(format!("{m} is not a dyadic number")));
        }
        let j = m.log2().round();
        if (j.exp2() - m).abs() > 1e-12 * m {
            return Err(Error::InvalidParameter(format!("{m} is not a power of two")));
        }
        Ok(Dyadic(j.exp2()))
    }

    pub fn pow2(j: i32) -> Self {
        Dyadic(2f64.powi(j))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Dyadic {
    type Error = Error;
    fn try_from(m: f64) -> Result<Self> {
        Dyadic::new(m)
    }
}

impl From<Dyadic> for f64 {
    fn from(d: Dyadic) -> f64 {
        d.0
    }
}

/// Frequency band selected by a projection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Band {
    /// `P_{≤M}`
    AtMost(Dyadic),
    /// `P_{>M}`
    Above(Dyadic),
    /// `P_M`
    Shell(Dyadic),
    /// `P_{<M}`
    Below(Dyadic),
    /// `P_{≥M}`
    AtLeast(Dyadic),
    /// `P_{M₁<·≤M₂}`
    Between(Dyadic, Dyadic),
}

fn le_symbol(m: f64, r: f64) -> f64 {
    phi(r / m)
}

fn shell_symbol(m: f64, r: f64) -> f64 {
    if m == 1.0 {
        phi(r)
    } else {
        psi(m, r)
    }
}

impl Band {
    fn largest(&self) -> f64 {
        match *self {
            Band::AtMost(m) | Band::Above(m) | Band::Shell(m) | Band::Below(m) | Band::AtLeast(m) => m.0,
            Band::Between(a, b) => a.0.max(b.0),
        }
    }

    /// Radial symbol value at `|ξ| = r`.
    pub fn symbol(&self, r: f64) -> f64 {
        match *self {
            Band::AtMost(m) => le_symbol(m.0, r),
            Band::Above(m) => 1.0 - le_symbol(m.0, r),
            Band::Shell(m) => shell_symbol(m.0, r),
            Band::Below(m) => le_symbol(m.0, r) - shell_symbol(m.0, r),
            Band::AtLeast(m) => (1.0 - le_symbol(m.0, r)) + shell_symbol(m.0, r),
            Band::Between(a, b) => le_symbol(b.0, r) - le_symbol(a.0, r),
        }
    }

    pub fn multiplier(&self) -> MultiplierSpec {
        let band = *self;
        MultiplierSpec::radial(format!("{band:?}"), move |r| band.symbol(r))
    }
}

/// Applies a Littlewood–Paley projection.
pub fn project(f: &Field, band: Band) -> Result<Field> {
    let nyq = f.grid().nyquist();
    let m = band.largest();
    if m > nyq {
        return Err(Error::AboveNyquist { m, nyquist: nyq });
    }
    if let Band::Between(a, b) = band {
        if a.0 > b.0 {
            return Err(Error::InvalidParameter("band (M1, M2] needs M1 <= M2".into()));
        }
    }
    apply_multiplier(f, &band.multiplier())
}

/// The six Bernstein ratios for one dyadic `M`.
///
/// Each ratio is bounded above (or, for the two shell ratios, above and below)
/// by a constant independent of `M`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernsteinRatios {
    /// `‖P_{≥M}f‖_p / (M^{−γ}‖Λ^γ P_{≥M}f‖_p)`
    pub high_inverse: f64,
    /// `‖P_{≤M}Λ^γ f‖_p / (M^γ‖P_{≤M}f‖_p)`
    pub low_derivative: f64,
    /// `‖P_M Λ^γ f‖_p / (M^γ‖P_M f‖_p)`
    pub shell_derivative: f64,
    /// `‖P_M Λ^{−γ} f‖_p / (M^{−γ}‖P_M f‖_p)`
    pub shell_antiderivative: f64,
    /// `‖P_{≤M}f‖_q / (M^{d/p−d/q}‖P_{≤M}f‖_p)`
    pub low_lp_lq: f64,
    /// `‖P_M f‖_q / (M^{d/p−d/q}‖P_M f‖_p)`
    pub shell_lp_lq: f64,
}

impl BernsteinRatios {
    pub const NAMES: [&'static str; 6] =
        ["high_inverse", "low_derivative", "shell_derivative", "shell_antiderivative", "low_lp_lq", "shell_lp_lq"];

    pub fn values(&self) -> [f64; 6] {
        [
            self.high_inverse,
            self.low_derivative,
            self.shell_derivative,
            self.shell_antiderivative,
            self.low_lp_lq,
            self.shell_lp_lq,
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BernsteinOutcome {
    Ratios(BernsteinRatios),
    /// The projection carried no energy; no ratio is defined.
    EmptyShell { l2: f64 },
}

/// Absolute `L²` norm below which a projection counts as empty.
pub const EMPTY_SHELL_L2: f64 = 1e-30;

/// Relative level `‖P_M f‖₂ / ‖f‖₂` treated as transform roundoff, hence empty.
pub const EMPTY_SHELL_RELATIVE: f64 = 1e-12;

/// Whether a projection of norm `projected` out of a field of norm `whole` is empty.
pub fn is_empty_shell(projected: f64, whole: f64) -> bool {
    projected < EMPTY_SHELL_L2 || projected <= EMPTY_SHELL_RELATIVE * whole
}

/// Evaluates every Bernstein ratio for `f` at scale `M`.
pub fn bernstein_check(f: &Field, m: Dyadic, gamma: f64, p: f64, q: f64) -> Result<BernsteinOutcome> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::InvalidExponent(gamma));
    }
    if p.is_nan() || p < 1.0 || q.is_nan() || q < p {
        return Err(Error::InvalidParameter(format!("need 1 <= p <= q, got p = {p}, q = {q}")));
    }
    let mv = m.value();
    let d = f.grid().d() as f64;
    let shell = project(f, Band::Shell(m))?;
    let l2 = lp_norm(&shell, 2.0)?;
    if is_empty_shell(l2, lp_norm(f, 2.0)?) {
        return Ok(BernsteinOutcome::EmptyShell { l2 });
    }
    let low = project(f, Band::AtMost(m))?;
    let high = project(f, Band::AtLeast(m))?;
    let up = MultiplierSpec::power(gamma);
    let down = MultiplierSpec::power_nonzero(-gamma);

    let ratio = |num: f64, den: f64| if den == 0.0 { f64::NAN } else { num / den };
    let shell_p = lp_norm(&shell, p)?;
    let low_p = lp_norm(&low, p)?;
    let scale_pq = mv.powf(d / p - d / q);

    let r = BernsteinRatios {
        high_inverse: ratio(
            lp_norm(&high, p)?,
            mv.powf(-gamma) * lp_norm(&apply_multiplier(&high, &up)?, p)?,
        ),
        low_derivative: ratio(lp_norm(&apply_multiplier(&low, &up)?, p)?, mv.powf(gamma) * low_p),
        shell_derivative: ratio(lp_norm(&apply_multiplier(&shell, &up)?, p)?, mv.powf(gamma) * shell_p),
        shell_antiderivative: ratio(
            lp_norm(&apply_multiplier(&shell, &down)?, p)?,
            mv.powf(-gamma) * shell_p,
        ),
        low_lp_lq: ratio(lp_norm(&low, q)?, scale_pq * low_p),
        shell_lp_lq: ratio(lp_norm(&shell, q)?, scale_pq * shell_p),
    };
    Ok(BernsteinOutcome::Ratios(r))
}

/// One CSV row of a Bernstein report: `(M, p, q, γ, ratio_name, value)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BernsteinRow {
    #[serde(rename = "M")]
    pub m: f64,
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    pub ratio_name: String,
    pub value: f64,
}

pub fn bernstein_rows(m: Dyadic, p: f64, q: f64, gamma: f64, r: &BernsteinRatios) -> Vec<BernsteinRow> {
    BernsteinRatios::NAMES
        .iter()
        .zip(r.values())
        .map(|(name, value)| BernsteinRow { m: m.value(), p, q, gamma, ratio_name: (*name).to_string(), value })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(phi(0.0), 1.0);
        assert_eq!(phi(1.0), 1.0);
        assert_eq!(phi(2.0), 0.0);
        assert_eq!(phi(1.5), 0.5);
        assert_eq!(smooth_step(0.5), 0.5);
        let mut prev = 1.0;
        for i in 0..=3000 {
            let v = phi(i as f64 * 0.001);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn dyadic_validation() {
        assert!(Dyadic::new(8.0).is_ok());
        assert!(Dyadic::new(0.25).is_ok());
        assert!(Dyadic::new(3.0).is_err());
        assert!(Dyadic::new(-2.0).is_err());
    }

    #[test]
    fn band_identities_as_built() {
        let m = Dyadic::new(4.0).unwrap();
        for i in 0..200 {
            let r = i as f64 * 0.07;
            let lt = Band::Below(m).symbol(r);
            let le = Band::AtMost(m).symbol(r);
            let sh = Band::Shell(m).symbol(r);
            assert_eq!(lt, le - sh);
            let ge = Band::AtLeast(m).symbol(r);
            let gt = Band::Above(m).symbol(r);
            assert_eq!(ge, gt + sh);
        }
    }

    #[test]
    fn above_nyquist_rejected() {
        let g = GridSpec::new(1, 3, 16.0, 32).unwrap();
        let f = Field::zeros(g);
        assert!(matches!(
            project(&f, Band::AtMost(Dyadic::new(4.0).unwrap())),
            Err(Error::AboveNyquist { .. })
        ));
    }

    #[test]
    fn single_mode_bernstein_is_exact() {
        // |ξ0| = M exactly: ψ_M(M) = 1.
        let g = GridSpec::new(1, 3, std::f64::consts::PI, 64).unwrap();
        let f = Field::plane_wave(g, &[8], Complex64::new(1.0, 0.0)).unwrap();
        let m = Dyadic::new(8.0).unwrap();
        let BernsteinOutcome::Ratios(r) = bernstein_check(&f, m, 1.3, 2.0, 2.0).unwrap() else {
            panic!("empty shell");
        };
        assert!((r.shell_derivative - 1.0).abs() < 1e-12);
        assert!((r.shell_antiderivative - 1.0).abs() < 1e-12);
        assert!((r.shell_lp_lq - 1.0).abs() < 1e-15);
    }

    #[test]
    fn empty_shell_outcome() {
        let g = GridSpec::new(1, 3, std::f64::consts::PI, 64).unwrap();
        let f = Field::plane_wave(g, &[1], Complex64::new(1.0, 0.0)).unwrap();
        let out = bernstein_check(&f, Dyadic::new(16.0).unwrap(), 1.0, 2.0, 4.0).unwrap();
        assert!(matches!(out, BernsteinOutcome::EmptyShell { .. }));
    }

    proptest! {
        #[test]
        fn telescoping_partition(r in 0.0f64..500.0) {
            let mut s = phi(r);
            let mut m = 2.0;
            while m <= 2048.0 {
                s += psi(m, r);
                m *= 2.0;
            }
            prop_assert!((s - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn shell_support(j in -3i32..8, r in 0.0f64..600.0) {
            let m = 2f64.powi(j);
            if r < m / 2.0 || r > 2.0 * m {
                prop_assert_eq!(psi(m, r), 0.0);
            }
        }
    }
}
