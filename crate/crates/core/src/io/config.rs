use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::analysis::{SummaryOptions, DEFAULT_BURN_IN, DEFAULT_GRID, DEFAULT_HALF_WIDTH, DEFAULT_PDF_BINS};
use crate::error::ConfigError;
use crate::sde::{InitialState, ModelKind, ModelParams, RecordOptions, TrajectorySpec};
use crate::spin::Spin;

const KEYS: &[&str] = &[
    "name",
    "spin",
    "model",
    "alpha",
    "epsilon",
    "dt",
    "duration",
    "seed",
    "n_traj",
    "stride",
    "initial",
    "out",
    "negativity_limit",
    "half_width",
    "pdf_bins",
    "burn_in",
    "grid",
];

const PRESETS: &[(&str, &str)] = &[
    ("fig2", include_str!("../../presets/fig2.toml")),
    ("fig3", include_str!("../../presets/fig3.toml")),
    ("fig4", include_str!("../../presets/fig4.toml")),
    ("fig5", include_str!("../../presets/fig5.toml")),
    ("fig6", include_str!("../../presets/fig6.toml")),
    ("fig7", include_str!("../../presets/fig7.toml")),
    ("fig8", include_str!("../../presets/fig8.toml")),
    ("fig9", include_str!("../../presets/fig9.toml")),
];

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub name: String,
    pub spin: Spin,
    pub model: ModelKind,
    /// One run per measurement strength.
    pub alpha: Vec<f64>,
    pub epsilon: f64,
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    pub n_traj: usize,
    pub stride: usize,
    pub initial: InitialState,
    pub out: PathBuf,
    pub negativity_limit: f64,
    pub half_width: f64,
    pub pdf_bins: usize,
    pub burn_in: f64,
    pub grid: usize,
}

impl RunConfig {
    pub fn spec(&self, alpha: f64) -> TrajectorySpec {
        TrajectorySpec {
            spin: self.spin,
            model: self.model,
            params: ModelParams {
                epsilon: self.epsilon,
                alpha,
                dt: self.dt,
                duration: self.duration,
                seed: self.seed,
            },
            initial: self.initial.clone(),
        }
    }

    pub fn record_options(&self) -> RecordOptions {
        RecordOptions {
            stride: self.stride,
            keep_states: true,
            negativity_limit: self.negativity_limit,
        }
    }

    pub fn summary_options(&self) -> SummaryOptions {
        SummaryOptions {
            half_width: self.half_width,
            pdf_bins: self.pdf_bins,
            burn_in: self.burn_in,
            grid: self.grid,
        }
    }
}

pub fn preset_names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn preset_text(name: &str) -> Result<&'static str, ConfigError> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_config_with(text, &[])
}

/// Parses `text`, then applies `key=value` overrides. Values are read as
/// TOML and fall back to bare strings.
pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let mut table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax(e.message().to_string()))?;
    let mut from_override = Vec::new();
    for o in overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| ConfigError::Key {
            key: o.clone(),
            line: None,
            message: "override must look like key=value".into(),
        })?;
        let k = k.trim().to_string();
        let v = v.trim();
        let value = format!("v = {v}")
            .parse::<Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| Value::String(v.to_string()));
        from_override.push(k.clone());
        table.insert(k, value);
    }
    let reader = Reader {
        text,
        table,
        from_override,
    };
    reader.resolve()
}

struct Reader<'a> {
    text: &'a str,
    table: Table,
    from_override: Vec<String>,
}

impl Reader<'_> {
    fn line_of(&self, key: &str) -> Option<usize> {
        if self.from_override.iter().any(|k| k == key) {
            return None;
        }
        self.text.lines().position(|l| {
            l.trim_start()
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map(|i| i + 1)
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::Key {
            key: key.to_string(),
            line: self.line_of(key),
            message: message.into(),
        }
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.table.get(key)
    }

    fn required(&self, key: &str) -> Result<&Value, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::Key {
            key: key.to_string(),
            line: None,
            message: "required key is missing".into(),
        })
    }

    fn number(&self, key: &str, v: &Value) -> Result<f64, ConfigError> {
        match v {
            Value::Float(x) => Ok(*x),
            Value::Integer(i) => Ok(*i as f64),
            other => Err(self.err(key, format!("expected a number, got {}", other.type_str()))),
        }
    }

    fn float_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        self.get(key).map_or(Ok(default), |v| self.number(key, v))
    }

    fn count_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Integer(i)) if *i >= 0 => Ok(*i as u64),
            Some(Value::Integer(_)) => Err(self.err(key, "must not be negative")),
            Some(other) => Err(self.err(
                key,
                format!("expected a non-negative integer, got {}", other.type_str()),
            )),
        }
    }

    fn string_or(&self, key: &str, default: &str) -> Result<String, ConfigError> {
        match self.get(key) {
            None => Ok(default.to_string()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(other) => Err(self.err(key, format!("expected a string, got {}", other.type_str()))),
        }
    }

    fn spin(&self) -> Result<Spin, ConfigError> {
        let text = match self.required("spin")? {
            Value::String(s) => s.clone(),
            Value::Float(x) => x.to_string(),
            Value::Integer(i) => i.to_string(),
            other => return Err(self.err("spin", format!("expected 1/2, 1 or 3/2, got {}", other.type_str()))),
        };
        text.parse().map_err(|e: crate::error::SpinError| self.err("spin", e.to_string()))
    }

    fn model(&self) -> Result<ModelKind, ConfigError> {
        match self.required("model")? {
            Value::String(s) => s.parse().map_err(|e: String| self.err("model", e)),
            other => Err(self.err("model", format!("expected a string, got {}", other.type_str()))),
        }
    }

    fn alpha(&self) -> Result<Vec<f64>, ConfigError> {
        let alphas = match self.required("alpha")? {
            Value::Array(items) => items
                .iter()
                .map(|v| self.number("alpha", v))
                .collect::<Result<Vec<_>, _>>()?,
            v => vec![self.number("alpha", v)?],
        };
        if alphas.is_empty() {
            return Err(self.err("alpha", "list must not be empty"));
        }
        Ok(alphas)
    }

    fn initial(&self, spin: Spin) -> Result<InitialState, ConfigError> {
        let key = "initial";
        let Some(v) = self.get(key) else {
            return Ok(InitialState::Eigenstate(-spin.value()));
        };
        match v {
            Value::Float(_) | Value::Integer(_) => Ok(InitialState::Eigenstate(self.number(key, v)?)),
            Value::Array(items) => Ok(InitialState::Coherence(
                items
                    .iter()
                    .map(|x| self.number(key, x))
                    .collect::<Result<_, _>>()?,
            )),
            Value::String(s) => {
                let s = s.trim();
                match s {
                    "mixed" => Ok(InitialState::Mixed),
                    "uniform-angle" => Ok(InitialState::UniformAngle),
                    _ => {
                        let (kind, arg) = s.split_once(':').unwrap_or(("eigenstate", s));
                        let x = parse_fraction(arg).ok_or_else(|| {
                            self.err(key, format!("cannot read a number from '{arg}'"))
                        })?;
                        match kind.trim() {
                            "eigenstate" => Ok(InitialState::Eigenstate(x)),
                            "angle" => Ok(InitialState::RabiAngle(x)),
                            other => Err(self.err(
                                key,
                                format!("unknown initial state '{other}'; expected eigenstate:<m>, angle:<phi>, mixed, uniform-angle or a coherence vector"),
                            )),
                        }
                    }
                }
            }
            other => Err(self.err(key, format!("unsupported type {}", other.type_str()))),
        }
    }

    fn resolve(&self) -> Result<RunConfig, ConfigError> {
        if let Some(k) = self.table.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(self.err(k, "unknown key"));
        }
        let spin = self.spin()?;
        let model = self.model()?;
        if !model.supports(spin) {
            return Err(self.err(
                "model",
                format!("model '{model}' is not available for spin {spin}"),
            ));
        }
        let cfg = RunConfig {
            name: self.string_or("name", "run")?,
            spin,
            model,
            alpha: self.alpha()?,
            epsilon: self.float_or("epsilon", 1.0)?,
            dt: self.float_or("dt", 1e-3)?,
            duration: self.float_or("duration", 10.0)?,
            seed: self.count_or("seed", 0)?,
            n_traj: self.count_or("n_traj", 1)? as usize,
            stride: self.count_or("stride", 10)? as usize,
            initial: self.initial(spin)?,
            out: PathBuf::from(self.string_or("out", "out")?),
            negativity_limit: self.float_or("negativity_limit", RecordOptions::default().negativity_limit)?,
            half_width: self.float_or("half_width", DEFAULT_HALF_WIDTH)?,
            pdf_bins: self.count_or("pdf_bins", DEFAULT_PDF_BINS as u64)? as usize,
            burn_in: self.float_or("burn_in", DEFAULT_BURN_IN)?,
            grid: self.count_or("grid", DEFAULT_GRID as u64)? as usize,
        };
        self.check(&cfg)?;
        Ok(cfg)
    }

    fn check(&self, cfg: &RunConfig) -> Result<(), ConfigError> {
        let positive = |key: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(self.err(key, format!("must be positive, got {x}")))
            }
        };
        positive("dt", cfg.dt)?;
        positive("duration", cfg.duration)?;
        positive("negativity_limit", cfg.negativity_limit)?;
        positive("half_width", cfg.half_width)?;
        if cfg.dt > cfg.duration {
            return Err(self.err("dt", "time step exceeds the duration"));
        }
        if !cfg.epsilon.is_finite() {
            return Err(self.err("epsilon", "must be finite"));
        }
        if let Some(a) = cfg.alpha.iter().find(|a| !(a.is_finite() && **a >= 0.0)) {
            return Err(self.err("alpha", format!("must be finite and non-negative, got {a}")));
        }
        if cfg.n_traj == 0 {
            return Err(self.err("n_traj", "must be at least 1"));
        }
        if cfg.stride == 0 {
            return Err(self.err("stride", "must be at least 1"));
        }
        if !(0.0..1.0).contains(&cfg.burn_in) {
            return Err(self.err("burn_in", "must lie in [0, 1)"));
        }
        if let InitialState::Eigenstate(m) = cfg.initial {
            crate::spin::SpinSystem::new(cfg.spin)
                .eigen_index(m)
                .map_err(|e| self.err("initial", e.to_string()))?;
        }
        if let InitialState::Coherence(v) = &cfg.initial {
            let want = crate::spin::CoherenceModel::general_for(cfg.spin).len();
            if v.len() != want {
                return Err(self.err(
                    "initial",
                    format!("coherence vector for spin {} needs {want} entries, got {}", cfg.spin, v.len()),
                ));
            }
        }
        cfg.spec(cfg.alpha[0])
            .validate()
            .map_err(|e| self.err("model", e.to_string()))
    }
}

/// Reads `"-3/2"`, `"0.5"` or `"2"`.
fn parse_fraction(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => Some(n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}
