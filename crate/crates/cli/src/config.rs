//! Channel configuration files and command-line overrides.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use cogcap::{ChannelParams, RawParams, Unit};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Information unit as spelled on the command line and in files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnitTag {
    #[default]
    Bits,
    Nats,
}

impl From<UnitTag> for Unit {
    fn from(u: UnitTag) -> Self {
        match u {
            UnitTag::Bits => Unit::Bits,
            UnitTag::Nats => Unit::Nats,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Contents of a `--config` JSON document. Missing channel fields default to
/// the unit channel (`P = Q1 = Q2 = N = 1`, both correlations zero).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_xs1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_s2z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<UnitTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ChannelConfig {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
            .map_err(|e| CliError::invalid(format!("{}: {}", path.display(), e.message)))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::invalid(format!("invalid config: {e}")))
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON channel configuration; flags override its fields
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Input power P
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    /// Variance of the transmitter state S1
    #[arg(long, allow_hyphen_values = true)]
    pub q1: Option<f64>,
    /// Variance of the receiver state S2
    #[arg(long, allow_hyphen_values = true)]
    pub q2: Option<f64>,
    /// Noise variance N
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<f64>,
    /// Correlation between X and S1
    #[arg(long, allow_hyphen_values = true)]
    pub rho_xs1: Option<f64>,
    /// Correlation between S2 and Z
    #[arg(long, allow_hyphen_values = true)]
    pub rho_s2z: Option<f64>,
    /// Output unit [default: bits]
    #[arg(long, value_enum)]
    pub unit: Option<UnitTag>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Random seed for sampling
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of Monte Carlo samples
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    /// Free-text label echoed into the output
    #[arg(long)]
    pub label: Option<String>,
}

/// Configuration after merging file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub raw: RawParams<f64>,
    pub unit: UnitTag,
    pub label: Option<String>,
}

impl Resolved {
    pub fn params(&self) -> Result<ChannelParams<f64>, CliError> {
        self.raw.validate().map_err(CliError::from)
    }
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let file = match &self.config {
            Some(path) => ChannelConfig::from_path(path)?,
            None => ChannelConfig::default(),
        };
        Ok(self.merge(file))
    }

    /// Flags win over file values.
    pub fn merge(&self, file: ChannelConfig) -> Resolved {
        let pick =
            |flag: Option<f64>, file: Option<f64>, default: f64| flag.or(file).unwrap_or(default);
        Resolved {
            raw: RawParams {
                p: pick(self.p, file.p, 1.0),
                q1: pick(self.q1, file.q1, 1.0),
                q2: pick(self.q2, file.q2, 1.0),
                n: pick(self.n, file.n, 1.0),
                rho_xs1: pick(self.rho_xs1, file.rho_xs1, 0.0),
                rho_s2z: pick(self.rho_s2z, file.rho_s2z, 0.0),
            },
            unit: self.unit.or(file.unit).unwrap_or_default(),
            label: self.label.clone().or(file.label),
        }
    }
}
