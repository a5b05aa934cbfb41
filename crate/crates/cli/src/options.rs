use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use scmnet_core::experiments::{NetworkKind, NetworkSpec, NoisePattern, SimSettings};
use scmnet_core::grid::DEFAULT_POINTS;
use scmnet_core::metrics::DEFAULT_THRESHOLD;
use scmnet_core::optimizer::MutationMode;

fn check_pattern(s: &str) -> std::result::Result<String, String> {
    s.parse::<NoisePattern>().map(|_| s.to_owned()).map_err(|e| e.to_string())
}

fn parse_network(s: &str) -> std::result::Result<NetworkKind, String> {
    s.parse().map_err(|e: scmnet_core::Error| e.to_string())
}

fn parse_mutation(s: &str) -> std::result::Result<MutationMode, String> {
    match s {
        "additive" => Ok(MutationMode::Additive),
        "multiplicative" => Ok(MutationMode::Multiplicative),
        "hybrid" => Ok(MutationMode::Hybrid),
        _ => Err(format!("unknown mutation mode '{s}' (expected additive, multiplicative or hybrid)")),
    }
}

/// Options shared by all subcommands. A JSON config file may set any of
/// them under the same names as the flags; flags win.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// JSON file with option values
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Network family: fc, fmo, fmo7 or path
    #[arg(long, value_parser = parse_network)]
    pub network: Option<NetworkKind>,
    /// Network description file (JSON); overrides --network
    #[arg(long)]
    pub network_file: Option<PathBuf>,
    /// Number of sites of fc and path networks
    #[arg(long)]
    pub sites: Option<usize>,
    /// Hopping of fc and path networks
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Sink rate
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Interaction strength in radians
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Interaction strengths for theta-sweep, comma separated
    #[arg(long, value_delimiter = ',')]
    pub thetas: Option<Vec<f64>>,
    /// Weibull shapes, comma separated
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<f64>>,
    /// Collision rate for simulate and reshuffle
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long)]
    pub zeta_min: Option<f64>,
    #[arg(long)]
    pub zeta_max: Option<f64>,
    #[arg(long)]
    pub zeta_points: Option<usize>,
    /// homogeneous, localized or mask=1,3,...
    #[arg(long, value_parser = check_pattern)]
    pub pattern: Option<String>,

    /// Trajectories per ensemble
    #[arg(long)]
    pub ntraj: Option<usize>,
    /// End of the time grid
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Points of the time grid
    #[arg(long)]
    pub points: Option<usize>,
    /// Sink population defining the transfer time
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Average per-trajectory performances instead of using the mean curve
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub per_trajectory: Option<bool>,

    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, env = "SCMNET_WORKERS")]
    #[serde(skip)]
    pub workers: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write two-column files for plotting
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub gnuplot: Option<bool>,

    /// Genetic pool size
    #[arg(long)]
    pub pool: Option<usize>,
    /// Generation cap
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub min_generations: Option<usize>,
    #[arg(long)]
    pub plateau_window: Option<usize>,
    #[arg(long)]
    pub plateau_tol: Option<f64>,
    /// additive, multiplicative or hybrid
    #[arg(long, value_parser = parse_mutation)]
    pub mutation: Option<MutationMode>,
    #[arg(long)]
    pub mutation_scale: Option<f64>,
    /// Upper bound of optimized rates
    #[arg(long)]
    pub zeta_bound: Option<f64>,
    /// Optimizer checkpoint; an existing file is resumed
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,

    /// Number of reshuffled networks
    #[arg(long)]
    pub samples: Option<usize>,
    /// Noise profile (JSON) for reshuffle, e.g. best_profile.json of optimize
    #[arg(long)]
    pub noise_profile: Option<PathBuf>,
}

macro_rules! merge {
    ($a:ident, $b:ident; $($f:ident),*) => {
        Options { config: $a.config, workers: $a.workers, $($f: $a.$f.or($b.$f)),* }
    };
}

impl Options {
    /// Fills unset flags from the config file, if one was given.
    pub fn resolve(self) -> Result<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load_config(&path)?;
        let a = self;
        let b = file;
        Ok(merge!(a, b; network, network_file, sites, coupling, gamma, theta, thetas, k, zeta, zeta_min, zeta_max,
            zeta_points, pattern, ntraj, tmax, points, threshold, per_trajectory, seed, out, gnuplot, pool,
            generations, min_generations, plateau_window, plateau_tol, mutation, mutation_scale, zeta_bound,
            checkpoint, samples, noise_profile))
    }

    pub fn network_spec(&self, default: NetworkKind) -> NetworkSpec {
        NetworkSpec {
            kind: self.network.unwrap_or(default),
            sites: self.sites.unwrap_or(20),
            coupling: self.coupling.unwrap_or(1.0),
            sink_rate: self.gamma,
            file: self.network_file.clone(),
        }
    }

    /// Time grid defaults scale with the inverse mean coupling.
    pub fn settings(&self, coupling_scale: f64, default_tmax: f64, default_traj: usize) -> SimSettings {
        SimSettings {
            n_traj: self.ntraj.unwrap_or(default_traj),
            t_max: self.tmax.unwrap_or(default_tmax / coupling_scale),
            n_points: self.points.unwrap_or(DEFAULT_POINTS),
            threshold: self.threshold.unwrap_or(DEFAULT_THRESHOLD),
            per_trajectory: self.per_trajectory.unwrap_or(false),
        }
    }

    pub fn pattern(&self, default: NoisePattern) -> Result<NoisePattern> {
        match &self.pattern {
            Some(p) => Ok(p.parse()?),
            None => Ok(default),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn out_dir(&self) -> Result<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from("out"));
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(dir)
    }

    pub fn theta(&self) -> f64 {
        self.theta.unwrap_or(std::f64::consts::FRAC_PI_2)
    }
}

fn load_config(path: &Path) -> Result<Options> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}
