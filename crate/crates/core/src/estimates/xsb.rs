use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fit::SlopeFit;
use crate::error::{Error, Result};
use crate::littlewood_paley::phi;
use crate::spectral::{forward_1d, inverse_1d, Field};

/// Exponents of the Bourgain-space estimates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XsbParams {
    pub gamma: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Default for XsbParams {
    fn default() -> Self {
        XsbParams { gamma: 1.0, b: 0.55, b_prime: 0.30 }
    }
}

impl XsbParams {
    /// Validated parameters: `0 < b′ < 1/2 < b` and `b + b′ < 1`.
    pub fn new(gamma: f64, b: f64, b_prime: f64) -> Result<Self> {
        let p = XsbParams { gamma, b, b_prime };
        p.validate()?;
        Ok(p)
    }

    /// Parameters used only to evaluate a norm; the ordering constraints on
    /// `b, b′` are not imposed.
    pub fn norm_only(gamma: f64, b: f64) -> Self {
        XsbParams { gamma, b, b_prime: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.gamma.is_finite() && 0.0 < self.b_prime && self.b_prime < 0.5 && 0.5 < self.b
            && self.b + self.b_prime < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "need 0 < b' < 1/2 < b and b + b' < 1, got b = {}, b' = {}",
                self.b, self.b_prime
            )))
        }
    }
}

/// Smooth time window: 1 on `[−1, 1]`, 0 outside `(−2, 2)`.
pub fn time_window(t: f64) -> f64 {
    phi(t.abs())
}

/// Route used to evaluate the `X^{γ,b}` norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XsbRoute {
    /// Space-time transform with weight `⟨ξ⟩^γ⟨τ − |ξ|ᵏ⟩^b`.
    Direct,
    /// Pull back by the free flow, then weight `⟨ξ⟩^γ⟨τ⟩^b`.
    Interaction,
}

fn bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn signed(l: usize, n: usize) -> f64 {
    if l < n.div_ceil(2) {
        l as f64
    } else {
        l as f64 - n as f64
    }
}

/// Discrete `X^{γ,b}` norm of `ψ(t)u(t)` for a trajectory sampled at
/// `t_j = t₀ + jΔt`.
///
/// The samples must cover the window support `[−2, 2]`, and the temporal
/// sampling must resolve the dispersion relation: `max |ξ|ᵏ < π/Δt`.
pub fn xsb_norm(traj: &[Field], t0: f64, dt: f64, params: &XsbParams, route: XsbRoute) -> Result<f64> {
    let nt = traj.len();
    if nt < 2 {
        return Err(Error::EmptyTrajectory);
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
    }
    let t_end = t0 + (nt - 1) as f64 * dt;
    if t0 > -2.0 || t_end < 2.0 {
        return Err(Error::InvalidParameter(format!(
            "window support [-2, 2] exceeds the sampled interval [{t0}, {t_end}]"
        )));
    }
    let grid = *traj[0].grid();
    if traj.iter().any(|f| f.grid() != &grid) {
        return Err(Error::GridMismatch);
    }
    let k = grid.k() as i32;
    let radii = grid.radii();
    let omega: Vec<f64> = radii.iter().map(|r| r.powi(k)).collect();
    let tau_max = PI / dt;
    if omega.iter().any(|&w| w >= tau_max) {
        return Err(Error::InvalidParameter(format!(
            "time step {dt} does not resolve the dispersion relation (need max |xi|^k < {tau_max})"
        )));
    }
    let ns = grid.len();

    // Space-time array stored slot-major so each time series is contiguous.
    let mut g = vec![Complex64::default(); ns * nt];
    for (j, f) in traj.iter().enumerate() {
        let tj = t0 + j as f64 * dt;
        let w = time_window(tj);
        if w == 0.0 {
            continue;
        }
        for (s, c) in f.spectrum().iter().enumerate() {
            let mut v = c * w;
            if route == XsbRoute::Interaction {
                v *= Complex64::from_polar(1.0, -tj * omega[s]);
            }
            g[s * nt + j] = v;
        }
    }
    let dtau = 2.0 * PI / (nt as f64 * dt);
    let mut total = 0.0;
    for s in 0..ns {
        let series = &mut g[s * nt..(s + 1) * nt];
        if series.iter().all(|c| *c == Complex64::default()) {
            continue;
        }
        forward_1d(series);
        let wx = bracket(radii[s]).powf(2.0 * params.gamma);
        for (l, c) in series.iter().enumerate() {
            let tau = signed(l, nt) * dtau;
            let shift = match route {
                XsbRoute::Direct => tau - omega[s],
                XsbRoute::Interaction => tau,
            };
            total += wx * bracket(shift).powf(2.0 * params.b) * c.norm_sqr();
        }
    }
    Ok((total * dt * grid.cell_volume() / (nt as f64 * ns as f64)).sqrt())
}

/// Complex time signal sampled on a periodic grid `t_j = (j − n/2)Δt`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSignal {
    pub values: Vec<Complex64>,
    pub dt: f64,
}

impl TimeSignal {
    pub fn new(values: Vec<Complex64>, dt: f64) -> Result<Self> {
        if values.len() < 4 || values.len() % 2 != 0 {
            return Err(Error::InvalidParameter("time signal needs an even number (>= 4) of samples".into()));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
        }
        Ok(TimeSignal { values, dt })
    }

    pub fn from_fn(n: usize, dt: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = (0..n).map(|j| f((j as f64 - (n / 2) as f64) * dt)).collect();
        Self::new(values, dt)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, j: usize) -> f64 {
        (j as f64 - (self.len() / 2) as f64) * self.dt
    }

    /// Half period `nΔt/2`; samples cover `[−P/2, P/2)`.
    pub fn half_period(&self) -> f64 {
        0.5 * self.len() as f64 * self.dt
    }

    fn frequencies(&self) -> Vec<f64> {
        let n = self.len();
        let dtau = 2.0 * PI / (n as f64 * self.dt);
        (0..n).map(|l| signed(l, n) * dtau).collect()
    }
}

/// Sobolev norm in time, `‖h‖²_{H^s} = (Δt/n) Σ ⟨τ_l⟩^{2s} |H_l|²`.
pub fn time_sobolev_norm(h: &TimeSignal, s: f64) -> f64 {
    let mut spec = h.values.clone();
    forward_1d(&mut spec);
    let taus = h.frequencies();
    let sum: f64 = spec.iter().zip(&taus).map(|(c, &t)| bracket(t).powf(2.0 * s) * c.norm_sqr()).sum();
    (sum * h.dt / h.len() as f64).sqrt()
}

/// `ψ_δ(t) ∫₀ᵗ g(s) ds` evaluated spectrally on the sample grid.
///
/// With `g = Σ c_l e^{iτ_l t}` the antiderivative is
/// `c₀t + Σ_{l≠0} c_l (e^{iτ_l t} − 1)/(iτ_l)`; the linear term is harmless
/// because `ψ_δ` is supported well inside the period.
pub fn cutoff_antiderivative(g: &TimeSignal, delta: f64) -> Result<TimeSignal> {
    if !(delta > 0.0 && 2.0 * delta < g.half_period()) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} must satisfy 0 < 2 delta < {}",
            g.half_period()
        )));
    }
    let n = g.len();
    let taus = g.frequencies();
    let mut spec = g.values.clone();
    forward_1d(&mut spec);
    // c_0 = mean value of g.
    let c0 = spec[0] / n as f64;
    spec[0] = Complex64::default();
    for (c, &t) in spec.iter_mut().zip(&taus).skip(1) {
        *c /= Complex64::new(0.0, t);
    }
    inverse_1d(&mut spec);
    let at_zero = spec[n / 2];
    let values = (0..n)
        .map(|j| {
            let t = g.time(j);
            time_window(t / delta) * (c0 * t + spec[j] - at_zero)
        })
        .collect();
    TimeSignal::new(values, g.dt)
}

/// Ratios of the time-cutoff Duhamel estimate across a `δ` sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DuhamelReport {
    pub deltas: Vec<f64>,
    /// `‖ψ_δ ∫₀ᵗ g‖_{H^b} / ‖g‖_{H^{−b′}}`
    pub ratios: Vec<f64>,
    /// Ratios multiplied by `δ^{−(1−b−b′)}`.
    pub normalized: Vec<f64>,
    /// Log-log fit of ratio against `δ`; absent when some ratio vanishes.
    pub fit: Option<SlopeFit>,
}

/// Evaluates `‖ψ_δ ∫₀ᵗ g‖_{H^b_t} / ‖g‖_{H^{−b′}_t}` for each `δ` and fits the
/// decay rate; the estimate predicts a slope of at least `1 − b − b′`.
pub fn duhamel_cutoff_check(g: &TimeSignal, deltas: &[f64], params: &XsbParams) -> Result<DuhamelReport> {
    params.validate()?;
    if deltas.len() < 3 {
        return Err(Error::InvalidParameter(format!("delta sweep needs >= 3 values, got {}", deltas.len())));
    }
    let den = time_sobolev_norm(g, -params.b_prime);
    let expo = 1.0 - params.b - params.b_prime;
    let mut ratios = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let h = cutoff_antiderivative(g, d)?;
        let num = time_sobolev_norm(&h, params.b);
        ratios.push(if den == 0.0 { 0.0 } else { num / den });
    }
    let normalized = ratios.iter().zip(deltas).map(|(r, d)| r * d.powf(-expo)).collect();
    let fit = if ratios.iter().all(|&r| r > 0.0) { Some(SlopeFit::from_raw(deltas, &ratios)?) } else { None };
    Ok(DuhamelReport { deltas: deltas.to_vec(), ratios, normalized, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::linear_propagate;
    use crate::spectral::GridSpec;

    #[test]
    fn params_validation() {
        assert!(XsbParams::new(1.0, 0.55, 0.30).is_ok());
        assert!(XsbParams::new(1.0, 0.45, 0.30).is_err());
        assert!(XsbParams::new(1.0, 0.75, 0.30).is_err());
        assert!(XsbParams::new(1.0, 0.55, 0.0).is_err());
    }

    fn free_trajectory(f0: &Field, t0: f64, dt: f64, nt: usize) -> Vec<Field> {
        (0..nt).map(|j| linear_propagate(f0, t0 + j as f64 * dt)).collect()
    }

    #[test]
    fn zero_trajectory_has_zero_norm() {
        let g = GridSpec::new(1, 3, 4.0, 8).unwrap();
        let traj = vec![Field::zeros(g); 300];
        assert_eq!(xsb_norm(&traj, -2.5, 0.02, &XsbParams::default(), XsbRoute::Direct).unwrap(), 0.0);
    }

    #[test]
    fn window_must_fit() {
        let g = GridSpec::new(1, 3, 4.0, 16).unwrap();
        let traj = vec![Field::zeros(g); 100];
        assert!(xsb_norm(&traj, -1.0, 0.02, &XsbParams::default(), XsbRoute::Direct).is_err());
    }

    #[test]
    fn unweighted_norm_is_plain_l2() {
        let g = GridSpec::new(1, 3, 4.0, 16).unwrap();
        let f0 = Field::from_fn(g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.1 * x[0]));
        let (t0, dt, nt) = (-2.5, 0.01, 501);
        let traj = free_trajectory(&f0, t0, dt, nt);
        let got = xsb_norm(&traj, t0, dt, &XsbParams::norm_only(0.0, 0.0), XsbRoute::Direct).unwrap();
        let cell = g.cell_volume();
        let mut acc = 0.0;
        for (j, f) in traj.iter().enumerate() {
            let w = time_window(t0 + j as f64 * dt);
            acc += f.values().iter().map(|v| (v * w).norm_sqr()).sum::<f64>() * cell * dt;
        }
        assert!((got - acc.sqrt()).abs() < 1e-10 * acc.sqrt());
    }

    #[test]
    fn routes_agree_on_free_solutions() {
        let g = GridSpec::new(1, 3, 4.0, 16).unwrap();
        let f0 = Field::from_fn(g, |x| Complex64::new((-x[0] * x[0]).exp(), 0.0));
        let (t0, dt, nt) = (-3.0, 0.005, 1200);
        let traj = free_trajectory(&f0, t0, dt, nt);
        let p = XsbParams::default();
        let a = xsb_norm(&traj, t0, dt, &p, XsbRoute::Direct).unwrap();
        let b = xsb_norm(&traj, t0, dt, &p, XsbRoute::Interaction).unwrap();
        assert!((a - b).abs() < 1e-3 * b, "{a} vs {b}");
    }

    #[test]
    fn pure_tone_against_closed_form() {
        let n = 4096;
        let dt = 16.0 / n as f64;
        let tau0 = 2.0 * PI * 5.0 / 16.0;
        let g = TimeSignal::from_fn(n, dt, |t| Complex64::from_polar(1.0, tau0 * t)).unwrap();
        for delta in [0.5, 1.0 / tau0] {
            let h = cutoff_antiderivative(&g, delta).unwrap();
            let exact = TimeSignal::from_fn(n, dt, |t| {
                (Complex64::from_polar(1.0, tau0 * t) - 1.0) / Complex64::new(0.0, tau0) * time_window(t / delta)
            })
            .unwrap();
            let err: f64 = h.values.iter().zip(&exact.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "{err}");
            let (a, b) = (time_sobolev_norm(&h, 0.55), time_sobolev_norm(&exact, 0.55));
            assert!((a - b).abs() < 1e-10 * b);
        }
    }

    #[test]
    fn zero_signal_gives_zero_ratios() {
        let g = TimeSignal::new(vec![Complex64::default(); 1024], 16.0 / 1024.0).unwrap();
        let r = duhamel_cutoff_check(&g, &[1.0, 0.5, 0.25], &XsbParams::default()).unwrap();
        assert!(r.ratios.iter().all(|&v| v == 0.0));
        assert!(r.fit.is_none());
        assert!(duhamel_cutoff_check(&g, &[1.0, 0.5], &XsbParams::default()).is_err());
    }
}
