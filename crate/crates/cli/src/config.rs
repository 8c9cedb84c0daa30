//! Run configuration shared by the flag parser and `--config` files.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    /// Classify a BT or d-interval Bruin map as finite type or unresolved.
    Classify(ClassifyArgs),
    /// Run one of the exact verification suites.
    Verify(VerifyArgs),
    /// Estimate Lyapunov exponents of a cocycle family.
    Lyapunov(LyapunovArgs),
    /// Build one of the explicit itineraries and check its certificates.
    Construct(ConstructArgs),
    /// Tower names, heights and masses of an itinerary.
    Towers(TowersArgs),
    /// Distances `‖t h_i‖` of the tower heights to the integers.
    Veech(VeechArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Verify(_) => "verify",
            Command::Lyapunov(_) => "lyapunov",
            Command::Construct(_) => "construct",
            Command::Towers(_) => "towers",
            Command::Veech(_) => "veech",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ClassifyArgs {
    /// BT parameter alpha, as p/q.
    #[arg(long, requires = "beta", conflicts_with = "lambda")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    /// BT parameter beta, as p/q.
    #[arg(long, requires = "alpha")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    /// Interval lengths of a Bruin map, comma separated p/q.
    #[arg(long, required_unless_present = "alpha")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    /// Number of intervals; must match `--lambda`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 20)]
    #[serde(default = "default_depth")]
    pub depth: usize,
}

fn default_depth() -> usize {
    20
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ColumnGrowth,
    Pf,
    Conjugation,
    Commutators,
    Steinberg,
    Galois,
    Order,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Dimension, or the largest dimension for `conjugation`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Largest k (or power, or search limit) the suite visits.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u64>,
    /// Random sequences drawn by `column-growth`.
    #[arg(long, default_value_t = 1000)]
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_trials() -> usize {
    1000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DistKind {
    Geometric,
    Uniform,
    Periodic,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LyapunovMode {
    /// Full spectrum by QR.
    Spectrum,
    /// Top exponent from column norms.
    Top,
    /// Paired gap between the dominant family and A.
    Gap,
    /// Sign of the second exponent of A with its supporting claims.
    Lambda2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct LyapunovArgs {
    /// a, b3, z, zt or a-inverse.
    #[arg(long, default_value = "a")]
    #[serde(default = "default_family")]
    pub family: String,
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_d")]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = DistKind::Geometric)]
    #[serde(default = "default_dist")]
    pub dist: DistKind,
    /// Success probability of the geometric law.
    #[arg(long, default_value_t = 0.5)]
    #[serde(default = "default_p")]
    pub p: f64,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_kmin")]
    pub kmin: u64,
    /// Truncation of the law.
    #[arg(long, default_value_t = 20)]
    #[serde(default = "default_kmax")]
    pub kmax: u64,
    /// Comma separated k values for `periodic` and `empirical`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ks: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Itineraries per seed.
    #[arg(long, default_value_t = 20)]
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Number of consecutive seeds starting at the global seed.
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_seeds")]
    pub seeds: u64,
    #[arg(long, value_enum, default_value_t = LyapunovMode::Spectrum)]
    #[serde(default = "default_mode")]
    pub mode: LyapunovMode,
}

fn default_family() -> String {
    "a".into()
}
fn default_d() -> usize {
    3
}
fn default_dist() -> DistKind {
    DistKind::Geometric
}
fn default_p() -> f64 {
    0.5
}
fn default_kmin() -> u64 {
    1
}
fn default_kmax() -> u64 {
    20
}
fn default_steps() -> usize {
    10_000
}
fn default_samples() -> usize {
    20
}
fn default_seeds() -> u64 {
    1
}
fn default_mode() -> LyapunovMode {
    LyapunovMode::Spectrum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    MinusOne,
    Irrational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: Construction,
    #[arg(long, default_value_t = 6)]
    #[serde(default = "default_blocks")]
    pub blocks: usize,
    /// Odd value used for `k_1` and the even-indexed `k` (minus-one only).
    #[arg(long, default_value_t = 1)]
    #[serde(default = "default_odd")]
    pub odd: u64,
    /// Points sampled per residual check.
    #[arg(long, default_value_t = 10_000)]
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_blocks() -> usize {
    6
}
fn default_odd() -> u64 {
    1
}
fn default_points() -> usize {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct TowersArgs {
    /// Comma separated itinerary.
    #[arg(long)]
    pub ks: String,
    /// Level; defaults to the length of `--ks`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_d")]
    pub d: usize,
    /// Longest name written out in full.
    #[arg(long, default_value_t = 200)]
    #[serde(default = "default_cutoff")]
    pub cutoff: usize,
}

fn default_cutoff() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct VeechArgs {
    #[arg(long)]
    pub ks: String,
    /// Frequency `t`, as p/q.
    #[arg(long)]
    pub t: String,
    #[arg(long)]
    pub n: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_unknown_fields() {
        let cfg = RunConfig {
            command: Command::Veech(VeechArgs { ks: "3,1,4,1".into(), t: "1/2".into(), n: 4 }),
            out: None,
            seed: 7,
            format: Format::Json,
        };
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&s).unwrap(), cfg);
        assert!(serde_json::from_str::<RunConfig>(&s.replace("\"seed\"", "\"sed\"")).is_err());
        let bad = r#"{"command":{"name":"veech","ks":"1","t":"1/2","n":1,"x":0}}"#;
        assert!(serde_json::from_str::<RunConfig>(bad).is_err());
        let minimal = r#"{"command":{"name":"verify","suite":"pf"}}"#;
        let cfg: RunConfig = serde_json::from_str(minimal).unwrap();
        assert_eq!(cfg.command, Command::Verify(VerifyArgs { suite: Suite::Pf, d: None, kmax: None, trials: 1000 }));
    }
}
