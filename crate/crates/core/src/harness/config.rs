//! Experiment configuration: defaults, file overlay and `key=value` overrides.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::data::{BumpProfile, DataSpec};
use crate::evolution::SolverConfig;
use crate::spectral::GridSpec;

/// Registered experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    Conserve,
    Scaling,
    Bernstein,
    Strichartz,
    Bilinear,
    Xsb,
    Duhamel,
    AlmostConservation,
    Growth,
    Thresholds,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 10] = [
        ExperimentName::Conserve,
        ExperimentName::Scaling,
        ExperimentName::Bernstein,
        ExperimentName::Strichartz,
        ExperimentName::Bilinear,
        ExperimentName::Xsb,
        ExperimentName::Duhamel,
        ExperimentName::AlmostConservation,
        ExperimentName::Growth,
        ExperimentName::Thresholds,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::Conserve => "conserve",
            ExperimentName::Scaling => "scaling",
            ExperimentName::Bernstein => "bernstein",
            ExperimentName::Strichartz => "strichartz",
            ExperimentName::Bilinear => "bilinear",
            ExperimentName::Xsb => "xsb",
            ExperimentName::Duhamel => "duhamel",
            ExperimentName::AlmostConservation => "almost-conservation",
            ExperimentName::Growth => "growth",
            ExperimentName::Thresholds => "thresholds",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        ExperimentName::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| ConfigError(format!("unknown experiment `{s}`")))
    }
}

/// Rejected configuration.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("configuration error: {0}")]
pub struct ConfigError(pub String);

/// Sweep axes; each experiment reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sweep {
    /// I-operator thresholds `N`.
    pub n_values: Vec<f64>,
    /// Horizons `T`.
    pub t_values: Vec<f64>,
    /// Dyadic pairs `(M₁, M₂)`.
    pub dyadic_pairs: Vec<(f64, f64)>,
    /// Single dyadic scales `M`.
    pub dyadics: Vec<f64>,
    /// Time-cutoff scales `δ`.
    pub deltas: Vec<f64>,
    /// Time steps for order studies.
    pub dt_values: Vec<f64>,
    /// Scaling parameters `λ`.
    pub lambdas: Vec<f64>,
    /// Dispersion orders for the threshold table.
    pub k_values: Vec<u32>,
}

/// Scalar experiment parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    /// Target regularity `γ`.
    pub gamma: f64,
    pub b: f64,
    pub b_prime: f64,
    /// Strichartz / Bernstein exponents; `"inf"` encodes infinity.
    #[serde(with = "exponent")]
    pub p: f64,
    #[serde(with = "exponent")]
    pub q: f64,
    /// Number of seeded data sets in a sweep.
    pub trials: usize,
    /// Time step of space-time samplings.
    pub sample_dt: f64,
    /// Number of time samples (bilinear, xsb).
    pub samples: usize,
    /// Horizon constant `c` in `T = c / M₂^{k−1}` (bilinear).
    pub horizon_constant: f64,
    /// Envelope width (bilinear data) or its scale `c` in `c/M` (Bernstein data).
    pub envelope: f64,
    /// Resolution multiplier of the refinement run (almost conservation).
    pub refine_factor: usize,
    /// Local time `δ_run` of one almost-conservation window.
    pub delta_run: f64,
    /// Time-signal length and half period (duhamel).
    pub signal_len: usize,
    pub signal_half_period: f64,
    /// Highest temporal mode of the seeded time signal.
    pub signal_band: usize,
    /// Constant `C₀` used by the rescaling plan; 0 means measure it.
    pub c0: f64,
    /// Threshold `N` at which `C₀` is measured.
    pub rescale_threshold: f64,
    /// Spectral decay `⟨ξ⟩^{−decay}` of the sandwich-check data.
    pub decay: f64,
    /// Step of the centred difference in the increment-rate check.
    pub rate_step: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            gamma: 1.0,
            b: 0.55,
            b_prime: 0.30,
            p: 4.0,
            q: 4.0,
            trials: 20,
            sample_dt: 1e-3,
            samples: 40,
            horizon_constant: 8.0,
            envelope: 1.0,
            refine_factor: 2,
            delta_run: 0.1,
            signal_len: 4096,
            signal_half_period: 8.0,
            signal_band: 8,
            c0: 0.0,
            rescale_threshold: 4.0,
            decay: 1.5,
            rate_step: 1e-4,
        }
    }
}

/// Lebesgue exponents: finite values as JSON numbers, infinity as `"inf"`.
mod exponent {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => match t.as_str() {
                "inf" | "infinity" | "Infinity" => Ok(f64::INFINITY),
                other => other.parse().map_err(serde::de::Error::custom),
            },
        }
    }
}

fn default_jobs() -> usize {
    1
}

/// Full description of one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub name: ExperimentName,
    pub grid: GridSpec,
    pub solver: SolverConfig,
    #[serde(default)]
    pub sweep: Sweep,
    pub data: DataSpec,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub seed: u64,
    /// Output root; the run directory is created beneath it.
    #[serde(default)]
    pub out: Option<String>,
    /// Worker threads for sweep points.
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

fn grid(d: usize, k: u32, l: f64, n: usize) -> GridSpec {
    GridSpec::new(d, k, l, n).expect("default grid is valid")
}

impl ExperimentConfig {
    /// Defaults tuned for each experiment.
    pub fn default_for(name: ExperimentName) -> Self {
        let mut c = ExperimentConfig {
            name,
            grid: grid(1, 3, 16.0, 256),
            solver: SolverConfig::new(1e-3, 1.0),
            sweep: Sweep::default(),
            data: DataSpec::Gaussian { amplitude: 1.0, width: 1.0 },
            params: Params::default(),
            seed: 1,
            out: None,
            jobs: 1,
        };
        match name {
            ExperimentName::Conserve => {
                c.grid = grid(1, 3, 16.0, 1024);
                c.solver = SolverConfig::new(1e-3, 10.0);
                c.solver.record_every = 10;
                c.sweep.dt_values = vec![0.01, 0.005, 0.0025];
                c.sweep.t_values = vec![1.0];
            }
            ExperimentName::Scaling => {
                c.grid = grid(3, 3, 8.0, 64);
                c.sweep.lambdas = vec![2.0, 4.0];
                c.sweep.n_values = vec![4.0];
            }
            ExperimentName::Bernstein => {
                c.grid = grid(1, 3, 8.0, 1024);
                c.sweep.dyadics = vec![2.0, 4.0, 8.0, 16.0, 32.0];
                c.params.p = 2.0;
                c.params.q = f64::INFINITY;
                c.params.envelope = 4.0;
                c.data = DataSpec::ShellRandom { amplitude: 1.0, cutoff: 1e9, decay: 0.0, envelope: None };
            }
            ExperimentName::Strichartz => {
                c.grid = grid(1, 3, 16.0, 256);
                c.sweep.t_values = vec![4.0];
                c.params.sample_dt = 1e-3;
                c.data = DataSpec::ShellRandom { amplitude: 1.0, cutoff: 8.0, decay: 0.0, envelope: Some(2.0) };
            }
            ExperimentName::Bilinear => {
                c.grid = grid(2, 2, 12.0, 1024);
                c.sweep.dyadic_pairs = vec![(1.0, 4.0), (1.0, 16.0), (1.0, 64.0)];
                c.params.trials = 3;
                c.params.samples = 40;
                c.params.horizon_constant = 8.0;
                c.params.envelope = 1.0;
                c.data = DataSpec::ShellRandom { amplitude: 1.0, cutoff: 1e9, decay: 0.0, envelope: Some(1.0) };
            }
            ExperimentName::Xsb => {
                c.grid = grid(1, 3, 8.0, 32);
                c.params.sample_dt = 2e-3;
                c.data = DataSpec::ShellRandom { amplitude: 1.0, cutoff: 5.0, decay: 1.0, envelope: None };
            }
            ExperimentName::Duhamel => {
                c.sweep.deltas = vec![1.0, 0.5, 0.25, 0.125];
                c.params.trials = 5;
            }
            ExperimentName::AlmostConservation => {
                c.grid = grid(1, 3, 16.0, 2048);
                c.solver = SolverConfig::new(5e-7, 0.1);
                c.solver.record_every = 10;
                c.sweep.n_values = vec![4.0, 8.0, 16.0, 32.0];
                c.params.delta_run = 0.1;
                c.params.refine_factor = 2;
                c.params.trials = 200;
                c.data = DataSpec::MultiBump {
                    amplitude: 0.95,
                    width: 0.5,
                    count: 1,
                    profile: BumpProfile::Exponential,
                };
            }
            ExperimentName::Growth => {
                c.grid = grid(1, 3, 32.0, 512);
                c.solver = SolverConfig::new(2e-3, 16.0);
                c.sweep.t_values = vec![1.0, 2.0, 4.0, 8.0, 16.0];
            }
            ExperimentName::Thresholds => {
                c.sweep.k_values = vec![3, 4];
            }
        }
        c
    }

    /// Builds a configuration: defaults for `name`, overlaid by the optional
    /// config file contents, then by `key=value` overrides (dotted paths).
    pub fn assemble(name: ExperimentName, file: Option<&str>, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut v = serde_json::to_value(Self::default_for(name)).map_err(|e| ConfigError(e.to_string()))?;
        if let Some(text) = file {
            let file_v: Value = serde_json::from_str(text).map_err(|e| ConfigError(format!("config file: {e}")))?;
            if let Some(n) = file_v.get("name").and_then(Value::as_str) {
                if n != name.as_str() {
                    return Err(ConfigError(format!("config file is for `{n}`, not `{name}`")));
                }
            }
            merge(&mut v, file_v);
        }
        for o in overrides {
            apply_override(&mut v, o)?;
        }
        let cfg: ExperimentConfig = serde_json::from_value(v).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.solver.validate().map_err(|e| ConfigError(e.to_string()))?;
        if self.jobs == 0 {
            return Err(ConfigError("jobs must be >= 1".into()));
        }
        let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(ConfigError(format!("sweep `{what}` must be non-empty"))) };
        match self.name {
            ExperimentName::Conserve => need(!self.sweep.dt_values.is_empty(), "dt_values")?,
            ExperimentName::Scaling => {
                need(!self.sweep.lambdas.is_empty(), "lambdas")?;
                need(!self.sweep.n_values.is_empty(), "n_values")?;
                if !self.grid.is_critical() {
                    return Err(ConfigError("scaling requires d = k".into()));
                }
            }
            ExperimentName::Bernstein => need(!self.sweep.dyadics.is_empty(), "dyadics")?,
            ExperimentName::Strichartz => need(!self.sweep.t_values.is_empty(), "t_values")?,
            ExperimentName::Bilinear => need(!self.sweep.dyadic_pairs.is_empty(), "dyadic_pairs")?,
            ExperimentName::Xsb => {}
            ExperimentName::Duhamel => {
                if self.sweep.deltas.len() < 3 {
                    return Err(ConfigError("sweep `deltas` needs at least 3 values".into()));
                }
            }
            ExperimentName::AlmostConservation => need(!self.sweep.n_values.is_empty(), "n_values")?,
            ExperimentName::Growth => {
                if self.sweep.t_values.len() < 3 {
                    return Err(ConfigError("sweep `t_values` needs at least 3 values".into()));
                }
            }
            ExperimentName::Thresholds => need(!self.sweep.k_values.is_empty(), "k_values")?,
        }
        if self.params.trials == 0 {
            return Err(ConfigError("params.trials must be >= 1".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON of everything that affects results
    /// (output location and worker count excluded), first 16 hex digits.
    pub fn hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serialises");
        if let Value::Object(m) = &mut v {
            m.remove("out");
            m.remove("jobs");
        }
        let digest = Sha256::digest(v.to_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() && k != "data" => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

/// Applies `a.b.c=value`; the value is parsed as JSON, falling back to a string.
fn apply_override(v: &mut Value, spec: &str) -> Result<(), ConfigError> {
    let (path, raw) = spec.split_once('=').ok_or_else(|| ConfigError(format!("override `{spec}` lacks `=`")))?;
    let value: Value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = v;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, p) in parts.iter().enumerate() {
        let obj = cur.as_object_mut().ok_or_else(|| ConfigError(format!("`{path}` does not name an object field")))?;
        if i + 1 == parts.len() {
            obj.insert((*p).to_string(), value);
            return Ok(());
        }
        cur = obj.entry((*p).to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    Err(ConfigError(format!("empty override path in `{spec}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_default_is_valid() {
        for name in ExperimentName::ALL {
            let c = ExperimentConfig::assemble(name, None, &[]).unwrap();
            assert_eq!(c.name, name);
            assert_eq!(name.as_str().parse::<ExperimentName>().unwrap(), name);
        }
        assert!("nope".parse::<ExperimentName>().is_err());
    }

    #[test]
    fn overrides_win_over_file() {
        let file = r#"{"seed": 5, "grid": {"n": 512}}"#;
        let c = ExperimentConfig::assemble(
            ExperimentName::Conserve,
            Some(file),
            &["seed=9".into(), "solver.dt=0.002".into()],
        )
        .unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.grid.n(), 512);
        assert_eq!(c.solver.dt, 0.002);
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(ExperimentConfig::assemble(ExperimentName::Conserve, None, &["grid.n=48".into()]).is_err());
        assert!(ExperimentConfig::assemble(ExperimentName::Duhamel, None, &["sweep.deltas=[1,0.5]".into()]).is_err());
        assert!(ExperimentConfig::assemble(ExperimentName::Conserve, Some("{not json"), &[]).is_err());
        assert!(ExperimentConfig::assemble(ExperimentName::Conserve, Some(r#"{"name":"growth"}"#), &[]).is_err());
        assert!(ExperimentConfig::assemble(ExperimentName::Scaling, None, &["grid.d=1".into()]).is_err());
    }

    #[test]
    fn infinite_exponent_round_trips() {
        let c = ExperimentConfig::assemble(ExperimentName::Bernstein, None, &[]).unwrap();
        assert!(c.params.q.is_infinite());
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"q\":\"inf\""));
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let c = ExperimentConfig::assemble(ExperimentName::Strichartz, None, &["params.q=inf".into()]).unwrap();
        assert!(c.params.q.is_infinite());
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = ExperimentConfig::default_for(ExperimentName::Growth);
        let mut b = a.clone();
        b.out = Some("/tmp/x".into());
        b.jobs = 4;
        assert_eq!(a.hash(), b.hash());
        b.seed = 2;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }
}
