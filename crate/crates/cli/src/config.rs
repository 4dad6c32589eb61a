//! Run configuration: a flat `key = value` file overridden by flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use hedrop::heprops::{resolve_data_dir, Isotope};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Usage(format!("unknown format '{other}' (csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub isotope: Isotope,
    /// m
    pub radius: f64,
    /// K
    pub temperature: f64,
    /// m
    pub wavelength: f64,
    /// W
    pub input_power: f64,
    /// W
    pub heat_load: f64,
    pub q_opt: f64,
    pub data_dir: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            isotope: Isotope::He4,
            radius: 1e-3,
            temperature: 0.3,
            wavelength: 1e-6,
            input_power: 10e-6,
            heat_load: 0.0,
            q_opt: 1e10,
            data_dir: None,
            output: None,
            format: None,
        }
    }
}

pub const KEYS: [&str; 10] = [
    "isotope",
    "radius_m",
    "temperature_K",
    "wavelength_m",
    "input_power_W",
    "heat_load_W",
    "q_opt",
    "data_dir",
    "output",
    "format",
];

fn number(key: &str, value: &str) -> CliResult<f64> {
    value
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("{key}: '{value}' is not a number")))
}

impl RunConfig {
    /// Applies one setting; the key must be one of [`KEYS`].
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let value = value.trim();
        match key {
            "isotope" => {
                self.isotope = value
                    .parse()
                    .map_err(|e: hedrop::Error| CliError::Usage(e.to_string()))?
            }
            "radius_m" => self.radius = number(key, value)?,
            "temperature_K" => self.temperature = number(key, value)?,
            "wavelength_m" => self.wavelength = number(key, value)?,
            "input_power_W" => self.input_power = number(key, value)?,
            "heat_load_W" => self.heat_load = number(key, value)?,
            "q_opt" => self.q_opt = number(key, value)?,
            "data_dir" => self.data_dir = Some(PathBuf::from(value)),
            "output" => self.output = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown configuration key '{other}' (expected one of {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment. Repeated keys are rejected.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err(CliError::Usage(format!("config line {}: '{key}' set twice", i + 1)));
            }
            seen.push(key);
            cfg.set(key, value).map_err(|e| match e {
                CliError::Usage(m) => CliError::Usage(format!("config line {}: {m}", i + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Every physical field must be positive (heat load may be zero).
    pub fn validate(&self) -> CliResult<()> {
        let positive = [
            ("radius_m", self.radius),
            ("temperature_K", self.temperature),
            ("wavelength_m", self.wavelength),
            ("input_power_W", self.input_power),
            ("q_opt", self.q_opt),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Usage(format!("{key} must be positive, got {v}")));
            }
        }
        if !(self.heat_load >= 0.0 && self.heat_load.is_finite()) {
            return Err(CliError::Usage(format!("heat_load_W must be non-negative, got {}", self.heat_load)));
        }
        Ok(())
    }

    /// Flag, then configuration, then the environment, then the bundled tables.
    pub fn resolved_data_dir(&self) -> PathBuf {
        resolve_data_dir(self.data_dir.as_deref())
    }
}
