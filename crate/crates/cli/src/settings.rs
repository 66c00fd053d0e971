//! Command-line flags, the JSON config file, and their merge.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// E_{α,β}(z) with its error estimate and branch
    Ml,
    /// Closed-form scalar solution and its numerical residual
    Scalar,
    /// Series solution: modal values and H¹₀ / H² norms over time
    Solve,
    /// μ-range and θ-windows, or the μ(ξ) sweep
    Intervals,
    /// Boundary trace energy and its ratio to the data norm
    Trace,
    /// Interpolation regularity ratios
    Regularity,
    /// Both sides of the 1-D Rellich identity
    Rellich,
    /// Large-time decay slopes of the H² norm
    Decay,
    /// Duality pairing against the boundary trace energy
    Duality,
    /// Deterministic invariant suite
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Nabla,
    Dalpha,
    Both,
}

/// Every setting is optional here; commands apply their own defaults and
/// report missing required values.
#[derive(Debug, Clone, Default, Parser, Deserialize)]
#[command(
    name = "fracwave",
    version,
    about = "Riemann-Liouville diffusion-wave numerics"
)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    #[arg(value_enum)]
    pub command: Option<Command>,

    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub z: Option<f64>,
    /// Eigenvalue for `scalar`
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    /// Interval length
    #[arg(long = "L", allow_negative_numbers = true)]
    #[serde(rename = "L")]
    pub l: Option<f64>,
    /// Rectangle side lengths
    #[arg(long = "L1", allow_negative_numbers = true, requires = "l2")]
    #[serde(rename = "L1")]
    pub l1: Option<f64>,
    #[arg(long = "L2", allow_negative_numbers = true, requires = "l1")]
    #[serde(rename = "L2")]
    pub l2: Option<f64>,
    #[arg(long)]
    pub modes: Option<usize>,

    /// Modal coefficients of u₁
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub c1: Option<Vec<f64>>,
    /// Modal coefficients of u₂
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    pub c2: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// flat or powerlaw(p)
    #[arg(long)]
    pub profile: Option<String>,
    /// Number of random data sets (trace, regularity)
    #[arg(long)]
    pub draws: Option<usize>,

    /// Time horizon
    #[arg(long = "T", allow_negative_numbers = true)]
    #[serde(rename = "T")]
    pub t: Option<f64>,
    /// Number of time steps
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// uniform or geometric:R
    #[arg(long)]
    pub grading: Option<String>,
    /// Spatial points (rellich, duality)
    #[arg(long)]
    pub points: Option<usize>,
    /// Start of the decay window [t0, 10 t0]
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, value_enum)]
    pub norm: Option<Norm>,
    /// lo,hi,step
    #[arg(long)]
    pub xi_sweep: Option<String>,

    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with the same keys; flags take precedence
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($field:ident),+ $(,)?) => {
        Settings {
            $($field: $top.$field.or($base.$field),)+
        }
    };
}

impl Settings {
    /// Fields set in `self` win over `base`.
    pub fn over(self, base: Settings) -> Settings {
        overlay!(
            self, base, command, alpha, beta, z, lambda, l, l1, l2, modes, c1, c2, seed, profile,
            draws, t, m, grading, points, t0, theta, mu, norm, xi_sweep, out, format, config,
        )
    }

    pub fn load(path: &Path) -> Result<Settings, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("config {}: {e}", path.display())))
    }

    /// Parses `args` and merges the config file named by `--config`, if any.
    pub fn resolve<I, S>(args: I) -> Result<Settings, Failure>
    where
        I: IntoIterator<Item = S>,
        S: Into<std::ffi::OsString> + Clone,
    {
        let flags = Settings::try_parse_from(args).map_err(Failure::Clap)?;
        match flags.config.clone() {
            Some(path) => Ok(flags.over(Settings::load(&path)?)),
            None => Ok(flags),
        }
    }

    pub fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T, Failure> {
        value.ok_or_else(|| Failure::usage(format!("missing --{flag}")))
    }
}
