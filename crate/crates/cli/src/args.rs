//! Command-line flags, the optional JSON config file, and their resolution
//! into fully specified run configurations. Flags win over the config file,
//! which wins over built-in defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "bgue", version, about = "Bordered GUE matrices: sampling, kernels, phase scans and edge laws")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON object of parameter defaults, keyed by flag name with underscores.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads; defaults to all available cores.
    #[arg(long, global = true, env = "BGUE_THREADS")]
    pub threads: Option<usize>,

    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// `csv` writes data files plus a JSON metadata sidecar; `json` writes a
    /// single JSON document with the data embedded.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw bordered matrices and write their spectra, one draw per row.
    Sample(SampleArgs),
    /// Evaluate the correlation kernel on a grid.
    Kernel(KernelArgs),
    /// Scan (c, sigma^2) for eigenvalue separation.
    Phase(PhaseArgs),
    /// Compare the largest-eigenvalue law with the soft-edge limit.
    Edge(EdgeArgs),
    /// Run the verification suite; exits 0 only if every check passes.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, Default)]
pub struct SampleArgs {
    /// Core size N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of borders.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathArg {
    Auto,
    General,
    Sigma1,
    Mu0,
    Gue,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, Default)]
pub struct KernelArgs {
    #[arg(long, value_enum)]
    pub path: Option<PathArg>,
    /// Core size N; the kernel has rank N + 1.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma2: Option<f64>,
    /// Grid `lo:hi:count`, used for both x and y.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, Default)]
pub struct PhaseArgs {
    /// Grid `lo:hi:count` of c = mu / sqrt(N/2).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    /// Grid `lo:hi:count` of sigma^2.
    #[arg(long)]
    pub sigma2: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgePathArg {
    Sigma1,
    Mu0,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceArg {
    Deformed,
    Airy,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, Default)]
pub struct EdgeArgs {
    #[arg(long, value_enum)]
    pub path: Option<EdgePathArg>,
    /// Deformation s for the sigma1 and mu0 tunings.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// General tuning: limiting c.
    #[arg(long)]
    pub c_hat: Option<f64>,
    /// General tuning: limiting sigma^2 (defaults to 2 - c_hat).
    #[arg(long)]
    pub sigma_hat2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub s2: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Limit law to compare against.
    #[arg(long, value_enum)]
    pub reference: Option<ReferenceArg>,
    /// Pass threshold for the KS distance.
    #[arg(long)]
    pub ks_bound: Option<f64>,
    /// Comma-separated N values for the finite-N kernel convergence table.
    #[arg(long)]
    pub ns: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, Default)]
pub struct VerifyArgs {
    /// Reduced Monte Carlo sizes.
    #[arg(long, conflicts_with = "full")]
    pub quick: bool,
    /// Full Monte Carlo sizes (the default).
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Fills unset flags from `config`. Keys unknown to `T` are ignored, so one
/// file can serve several commands.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, config: Option<&Value>) -> Result<T, CliError> {
    let Some(Value::Object(base)) = config else {
        return serde_json::from_value(serde_json::to_value(flags).map_err(param)?).map_err(param);
    };
    let mut merged = base.clone();
    if let Value::Object(set) = serde_json::to_value(flags).map_err(param)? {
        for (k, v) in set {
            if !v.is_null() && v != Value::Bool(false) {
                merged.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Param(format!("config file: {e}")))
}

fn param(e: serde_json::Error) -> CliError {
    CliError::Param(e.to_string())
}

pub fn load_config(path: &std::path::Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Param(format!("cannot read config {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Param(format!("config {} is not valid JSON: {e}", path.display())))?;
    if !v.is_object() {
        return Err(CliError::Param("config file must hold a JSON object".into()));
    }
    Ok(v)
}

/// Evenly spaced grid `lo:hi:count`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linspace {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Linspace {
    pub fn parse(name: &str, spec: &str) -> Result<Self, CliError> {
        let bad = || CliError::Param(format!("--{name} must look like lo:hi:count, got '{spec}'"));
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if count == 0 || !lo.is_finite() || !hi.is_finite() || (count > 1 && !(hi > lo)) {
            return Err(CliError::Param(format!("--{name} needs count >= 1 and lo < hi, got '{spec}'")));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.lo + k as f64 * h).collect()
    }
}

pub fn parse_list(name: &str, spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Param(format!("--{name} must be a comma-separated list of integers, got '{spec}'")))
        })
        .collect()
}
