//! Flat key-value experiment configuration.
//!
//! A config file is TOML with top-level keys only. Every key is optional;
//! command-line flags override file values key by key.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Distance,
    Ball,
    Nondoubling,
    Cover,
    Approxdiff,
    Porosity,
    Gamma,
    Uniqueness,
    Selftest,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        Self::Distance,
        Self::Ball,
        Self::Nondoubling,
        Self::Cover,
        Self::Approxdiff,
        Self::Porosity,
        Self::Gamma,
        Self::Uniqueness,
        Self::Selftest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Distance => "distance",
            Self::Ball => "ball",
            Self::Nondoubling => "nondoubling",
            Self::Cover => "cover",
            Self::Approxdiff => "approxdiff",
            Self::Porosity => "porosity",
            Self::Gamma => "gamma",
            Self::Uniqueness => "uniqueness",
            Self::Selftest => "selftest",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown experiment kind {s:?}"))
    }
}

/// TOML integers are signed; seeds above `i64::MAX` are stored as strings.
mod seed_repr {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(seed: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match seed {
            None => s.serialize_none(),
            Some(v) => match i64::try_from(*v) {
                Ok(i) => Repr::Int(i).serialize(s),
                Err(_) => Repr::Text(v.to_string()).serialize(s),
            },
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        use serde::de::Error;
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Int(i)) => u64::try_from(i).map(Some).map_err(D::Error::custom),
            Some(Repr::Text(t)) => t.parse().map(Some).map_err(D::Error::custom),
        }
    }
}

/// Everything that determines a run. Points, radii and rationals are kept
/// as their textual form (`"1,2,1@11/64"`, `"1/2^10"`, `"1/10"`) and parsed
/// when the experiment starts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,

    /// Truncation depth N of the base space.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none", with = "seed_repr")]
    pub seed: Option<u64>,

    /// Base point as comma-separated coordinates, e.g. 1,2,1,4.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,

    /// Height as p/q or p/2^q.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<String>,

    /// Second point, base@height.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<String>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<String>,

    /// Comma-separated radii.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<String>,

    /// Levels as a..b (inclusive) or a comma list.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levels: Option<String>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    /// Random candidates per radius (porosity) or per search (gamma).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,

    /// Radius grid r j / 2^resolution for the gamma search.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u32>,

    /// height | constant:Q | distance:POINT | cone:POINT | cones:POINT;POINT;...
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,

    /// level:U | points:POINT;POINT;...
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,

    /// Vertical derivative supplied instead of estimated.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub derivative: Option<f64>,

    /// Stabilisation tolerance for the vertical derivative.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,

    /// Chart increments: DELTA:DIST entries separated by ';', DELTA comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub increments: Option<String>,

    /// Chart dimension (1 or 2).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,

    /// Random cases per selftest check.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,

    /// CSV output path; stdout when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,

    /// JSON report path.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,

    /// Record the wall-clock start time in the JSON report.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<bool>,
}

macro_rules! overlay {
    ($base:ident, $over:ident; $($field:ident),* $(,)?) => {
        ExperimentConfig { $($field: $over.$field.or($base.$field)),* }
    };
}

impl ExperimentConfig {
    /// `over`'s keys win; keys it leaves unset fall back to `self`.
    pub fn overlay(self, over: ExperimentConfig) -> ExperimentConfig {
        let base = self;
        overlay!(base, over; experiment, depth, seed, base, height, other, radius, radii, levels, epsilon, delta,
            samples, budget, resolution, field, set, derivative, tolerance, increments, dim, cases, csv, json,
            timestamp)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("malformed config {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?).with_context(|| format!("writing {}", path.display()))
    }
}
