use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Serialize, Serializer};

use cylpack::line_families::FamilyKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Rings,
    Construct,
    Verify,
    Density,
    Lemmas,
    Hole,
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Perp,
    Local,
    Global,
}

impl From<Family> for FamilyKind {
    fn from(f: Family) -> Self {
        match f {
            Family::Perp => FamilyKind::Perpendicular,
            Family::Local => FamilyKind::Local,
            Family::Global => FamilyKind::Global,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Quartic,
    Cos,
    Gap,
    Lemma1,
    Identities,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eps {
    Auto,
    Value(f64),
}

impl std::str::FromStr for Eps {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Eps::Auto);
        }
        s.parse::<f64>()
            .map(Eps::Value)
            .map_err(|_| format!("expected a real number or \"auto\", got {s:?}"))
    }
}

impl Serialize for Eps {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Eps::Auto => s.serialize_str("auto"),
            Eps::Value(v) => s.serialize_f64(*v),
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Family of axes.
    #[arg(long, value_enum, default_value = "global", global = true)]
    pub family: Family,

    /// Truncation radius of the ring set (and ball radius for density).
    #[arg(long = "R", default_value_t = 96, global = true)]
    #[serde(rename = "R")]
    pub big_r: u32,

    /// Slope constant of the global construction.
    #[arg(long = "L", default_value_t = 7.0, global = true)]
    #[serde(rename = "L")]
    pub l: f64,

    /// Cylinder radius before tilting.
    #[arg(long = "r", default_value_t = 0.5, global = true)]
    pub r: f64,

    /// Tilt parameter of the local construction, or `auto` for 8 r^2 / R^4.
    #[arg(long, default_value = "auto", global = true)]
    pub eps: Eps,

    /// Monte Carlo samples (per cylinder for congruence checks).
    #[arg(long, default_value_t = 10_000_000, global = true)]
    pub samples: u64,

    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,

    #[arg(long, value_enum, default_value = "exhaustive", global = true)]
    pub mode: VerifyMode,

    /// Pairs drawn in sampled verification.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    pub pairs: u64,

    /// Worker threads; all cores when omitted.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file; standard output when omitted.
    #[arg(long = "out", global = true)]
    pub out_path: Option<PathBuf>,

    /// Output format; json by default, svg for `figure`.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Planar points (CSV with `x,y` columns, optionally `d,m,k`) instead of the ring set.
    #[arg(long, global = true)]
    pub points: Option<PathBuf>,

    /// Accept points without ring provenance in the global construction.
    #[arg(long = "unsafe", global = true)]
    pub allow_unsafe: bool,

    /// Record wall-clock time in reports (makes reruns differ).
    #[arg(long, global = true)]
    pub timing: bool,
}

/// Everything a run depends on; embedded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(flatten)]
    pub common: Common,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub extra: serde_json::Value,
}
