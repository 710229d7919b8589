use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::InvariantParams;
use crate::mass::MassProfile;

pub const PAPER_TOY: &str = "paper-toy";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MassSpec {
    Quadratic { m0: f64, b: f64 },
    Constant { m0: f64 },
    /// Either inline `samples` of `[t, m]` or a two-column CSV at `path`.
    Tabulated {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<Vec<[f64; 2]>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantSpec {
    pub alpha0: f64,
    pub beta: f64,
    pub gamma0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub hbar: f64,
    pub x0: f64,
    #[serde(default)]
    pub normalize: bool,
    pub mass: MassSpec,
    pub invariant: InvariantSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

// Every field optional so a file may name a preset and override parts of it.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Option<String>,
    hbar: Option<f64>,
    x0: Option<f64>,
    normalize: Option<bool>,
    mass: Option<MassSpec>,
    invariant: Option<RawInvariant>,
    output: Option<OutputSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInvariant {
    alpha0: Option<f64>,
    beta: Option<f64>,
    gamma0: Option<f64>,
    hbar: Option<f64>,
}

impl RunConfig {
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            PAPER_TOY => Ok(Self {
                preset: Some(PAPER_TOY.to_string()),
                hbar: 1.0,
                x0: 4.0,
                normalize: false,
                mass: MassSpec::Quadratic { m0: 1.0, b: 0.5 },
                invariant: InvariantSpec {
                    alpha0: 2.0,
                    beta: 1.0,
                    gamma0: 1.0,
                },
                output: OutputSpec::default(),
            }),
            other => Err(Error::Config(format!("unknown preset '{other}' (known: {PAPER_TOY})"))),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let base = raw.preset.as_deref().map(Self::preset).transpose()?;
        let missing = |field: &str| Error::Config(format!("missing field '{field}' and no preset given"));
        let inv = raw.invariant.unwrap_or_default();
        let hbar = match (raw.hbar, inv.hbar) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Config(format!("hbar = {a} conflicts with invariant.hbar = {b}")))
            }
            (a, b) => a.or(b),
        };
        let base_inv = base.as_ref().map(|b| b.invariant);
        let pick = |v: Option<f64>, f: fn(&InvariantSpec) -> f64, name: &str| {
            v.or(base_inv.as_ref().map(f))
                .ok_or_else(|| missing(&format!("invariant.{name}")))
        };
        let cfg = Self {
            preset: raw.preset.clone(),
            hbar: hbar.or(base.as_ref().map(|b| b.hbar)).ok_or_else(|| missing("hbar"))?,
            x0: raw.x0.or(base.as_ref().map(|b| b.x0)).ok_or_else(|| missing("x0"))?,
            normalize: raw.normalize.or(base.as_ref().map(|b| b.normalize)).unwrap_or(false),
            mass: raw
                .mass
                .or(base.as_ref().map(|b| b.mass.clone()))
                .ok_or_else(|| missing("mass"))?,
            invariant: InvariantSpec {
                alpha0: pick(inv.alpha0, |i| i.alpha0, "alpha0")?,
                beta: pick(inv.beta, |i| i.beta, "beta")?,
                gamma0: pick(inv.gamma0, |i| i.gamma0, "gamma0")?,
            },
            output: raw.output.or(base.map(|b| b.output)).unwrap_or_default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x0 >= 0.0) || !self.x0.is_finite() {
            return Err(Error::Config(format!("x0 = {} must be finite and non-negative", self.x0)));
        }
        self.params()?;
        self.profile()?;
        Ok(())
    }

    pub fn params(&self) -> Result<InvariantParams<f64>> {
        let i = &self.invariant;
        InvariantParams::new(i.alpha0, i.beta, i.gamma0, self.hbar)
    }

    pub fn profile(&self) -> Result<MassProfile<f64>> {
        match &self.mass {
            MassSpec::Quadratic { m0, b } => MassProfile::quadratic(*m0, *b),
            MassSpec::Constant { m0 } => MassProfile::constant(*m0),
            MassSpec::Tabulated { path, samples } => {
                let rows = match (path, samples) {
                    (None, Some(s)) => s.iter().map(|r| (r[0], r[1])).collect(),
                    (Some(p), None) => read_mass_csv(p)?,
                    _ => {
                        return Err(Error::Config(
                            "tabulated mass needs exactly one of 'path' or 'samples'".into(),
                        ))
                    }
                };
                MassProfile::tabulated(rows)
            }
        }
    }
}

/// Two numeric columns `t, m`; a non-numeric first line is taken as a header.
fn read_mass_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read mass table {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match cols.as_slice() {
            [t, m] => t.parse::<f64>().ok().zip(m.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some(row) => rows.push(row),
            None if i == 0 => continue,
            None => {
                return Err(Error::Config(format!(
                    "{}:{}: expected 't, m', got '{line}'",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(rows)
}
