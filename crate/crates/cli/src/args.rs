use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "spinmagic", version, about = "Magic, squeezing and Bell-correlation sweeps for symmetric qubit states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One-axis twisting trajectory: SRE, squeezing and Bell correlator against χt.
    OatSweep(OatSweepArgs),
    /// Best-squeezing or fixed-ξ² scaling with N.
    Scaling(ScalingArgs),
    /// Kitten states at χt = π/n.
    Kitten(KittenArgs),
    /// The m = 0 Dicke state.
    Dicke(DickeArgs),
    /// Generalized GHZ states over a 2ε grid.
    Gghz(GghzArgs),
    /// Twist-echo estimates of the six cardinal overlaps.
    Readout(ReadoutArgs),
    /// Husimi function of a stored state.
    Husimi(HusimiArgs),
    /// Stabilizer Rényi entropy of a stored state.
    Sre(SreArgs),
    /// Write a state file.
    State(StateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads for sweep rows.
    #[arg(long, env = "SPINMAGIC_THREADS")]
    pub threads: Option<usize>,
    /// JSON object whose keys override the flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct OatSweepArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub t_max: f64,
    /// Grid intervals; rows are χt = t_max·i/steps for i = 0..=steps.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Add the exact symmetric SRE when N is at most this.
    #[arg(long)]
    pub exact_below: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ScalingArgs {
    #[arg(long, default_value = "oat")]
    pub protocol: String,
    /// `a,b,c` or `a..b` (step a) or `a..b:step`.
    #[arg(long)]
    pub n_list: Option<String>,
    #[arg(long)]
    pub fixed_xi2: Option<f64>,
    #[arg(long)]
    pub best: bool,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 200)]
    pub exact_below: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct KittenArgs {
    #[arg(long)]
    pub n_list: Option<String>,
    #[arg(long, default_value = "2,4,6,8,10")]
    pub heads: String,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 0)]
    pub exact_below: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct DickeArgs {
    #[arg(long)]
    pub n_list: Option<String>,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 256)]
    pub exact_below: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GghzArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of 2ε points spanning [0, π].
    #[arg(long, default_value_t = 50)]
    pub eps_grid: usize,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, default_value_t = 200)]
    pub exact_below: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReadoutArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub chi_t: f64,
    #[arg(long, default_value_t = 0.01)]
    pub theta: f64,
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `analytic-gain` or `paper-literal`.
    #[arg(long, default_value = "analytic-gain")]
    pub mode: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct HusimiArgs {
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// `PxQ`: θ samples by φ samples.
    #[arg(long, default_value = "91x181")]
    pub grid: String,
    /// Local maxima below this fraction of the global maximum are not reported.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SreArgs {
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// `oracle`, `symmetric`, `coherent` or `approx`.
    #[arg(long, default_value = "symmetric")]
    pub method: String,
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct StateArgs {
    /// `coherent`, `plus-x`, `oat`, `tact`, `kitten`, `dicke` or `gghz`.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub chi_t: f64,
    #[arg(long, default_value_t = 2)]
    pub heads: usize,
    #[arg(long, default_value_t = 0)]
    pub m: i64,
    #[arg(long, default_value_t = 0.0)]
    pub two_eps: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

/// Overlay the keys of a JSON config object onto parsed flags. Dashes and underscores in keys
/// are interchangeable; unknown keys are rejected.
pub fn merge_config<A: Serialize + DeserializeOwned>(args: A, config: Option<&Path>) -> Result<A, CliError> {
    let Some(path) = config else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let cfg: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let serde_json::Value::Object(cfg) = cfg else {
        return Err(CliError::Usage("config must be a JSON object".into()));
    };
    let mut base = serde_json::to_value(&args).map_err(|e| CliError::Usage(e.to_string()))?;
    let obj = base.as_object_mut().ok_or_else(|| CliError::Usage("internal: arguments are not an object".into()))?;
    for (k, v) in cfg {
        let key = k.replace('-', "_");
        if !obj.contains_key(&key) {
            return Err(CliError::Usage(format!("config key {k:?} does not apply to this command")));
        }
        obj.insert(key, v);
    }
    serde_json::from_value(base).map_err(|e| CliError::Usage(format!("config: {e}")))
}

/// `a,b,c`, `a..b` (step a) or `a..b:step`, inclusive.
pub fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse list {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let out = if let Some((a, rest)) = s.split_once("..") {
        let (b, step) = match rest.split_once(':') {
            Some((b, st)) => (num(b)?, num(st)?),
            None => (num(rest)?, num(a)?),
        };
        let a = num(a)?;
        if step == 0 || b < a {
            return Err(bad());
        }
        (a..=b).step_by(step).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// `PxQ`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("grid must look like 91x181, got {s:?}"));
    let (p, q) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let p = p.trim().parse().map_err(|_| bad())?;
    let q = q.trim().parse().map_err(|_| bad())?;
    Ok((p, q))
}

pub fn require<T>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
}
