use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{NetworkSpec, SimSettings};
use crate::error::Result;
use crate::network::ExcitationNetwork;
use crate::optimizer::{
    run_genetic_with_checkpoint, FitnessSettings, GenerationStats, GeneticConfig, Individual, MutationMode,
    DEFAULT_MUTATION_SCALE, DEFAULT_POOL,
};

/// Settings of a noise optimization run. Missing rate ranges default to
/// multiples of the mean coupling of the network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizeSpec {
    pub network: NetworkSpec,
    pub settings: SimSettings,
    pub theta: f64,
    pub seed: u64,
    pub pool_size: usize,
    pub max_generations: usize,
    pub min_generations: usize,
    pub plateau_window: usize,
    pub plateau_tolerance: f64,
    pub mutation_mode: MutationMode,
    pub mutation_scale: f64,
    /// Initial log-uniform range of the rates.
    pub zeta_init: Option<[f64; 2]>,
    /// Upper bound of the rates.
    pub zeta_max: Option<f64>,
    pub shape_init: [f64; 2],
    pub shape_bounds: [f64; 2],
    pub reseed_each_generation: bool,
}

impl Default for OptimizeSpec {
    fn default() -> Self {
        Self {
            network: NetworkSpec::fmo(),
            settings: SimSettings { n_traj: 500, t_max: 2.0, n_points: 400, ..SimSettings::default() },
            theta: std::f64::consts::FRAC_PI_2,
            seed: 0,
            pool_size: DEFAULT_POOL,
            max_generations: 100,
            min_generations: 0,
            plateau_window: 10,
            plateau_tolerance: 1e-3,
            mutation_mode: MutationMode::Hybrid,
            mutation_scale: DEFAULT_MUTATION_SCALE,
            zeta_init: None,
            zeta_max: None,
            shape_init: [0.3, 30.0],
            shape_bounds: [0.1, 100.0],
            reseed_each_generation: true,
        }
    }
}

impl OptimizeSpec {
    pub fn config(&self, net: &ExcitationNetwork) -> Result<GeneticConfig> {
        let s = &self.settings;
        s.validate()?;
        let mut fs = FitnessSettings::new(s.grid()?, s.n_traj, self.theta);
        fs.threshold = s.threshold;
        fs.per_trajectory = s.per_trajectory;
        let mut c = GeneticConfig::for_network(net, fs);
        let g = net.coupling_scale();
        let zeta_init = self.zeta_init.unwrap_or([1e-2 * g, 1e3 * g]);
        let zeta_max = self.zeta_max.unwrap_or(1e3 * g);
        for i in 0..net.n_sites() {
            c.bounds[2 * i] = [0.0, zeta_max];
            c.init_ranges[2 * i] = zeta_init;
            c.bounds[2 * i + 1] = self.shape_bounds;
            c.init_ranges[2 * i + 1] = self.shape_init;
        }
        c.pool_size = self.pool_size;
        c.parent_count = self.pool_size / 2;
        c.max_generations = self.max_generations;
        c.min_generations = self.min_generations;
        c.plateau_window = self.plateau_window;
        c.plateau_tolerance = self.plateau_tolerance;
        c.mutation_mode = self.mutation_mode;
        c.mutation_scale = self.mutation_scale;
        c.reseed_each_generation = self.reseed_each_generation;
        c.validate(net.n_sites())?;
        Ok(c)
    }
}

/// Five-number summary of one parameter across a pool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterSummary {
    /// 1-based node label.
    pub node: usize,
    /// `zeta` or `k`.
    pub parameter: String,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeReport {
    pub best: Individual,
    pub history: Vec<GenerationStats>,
    pub pool: Vec<Individual>,
    pub summary: Vec<ParameterSummary>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Per-node quartiles of `ζ_i` and `k_i` over a pool.
pub fn summarize_pool(pool: &[Individual]) -> Vec<ParameterSummary> {
    let genes = pool[0].genes.len();
    (0..genes)
        .map(|g| {
            let mut v: Vec<f64> = pool.iter().map(|ind| ind.genes[g]).collect();
            v.sort_by(f64::total_cmp);
            ParameterSummary {
                node: g / 2 + 1,
                parameter: if g % 2 == 0 { "zeta" } else { "k" }.to_owned(),
                min: v[0],
                q1: quantile(&v, 0.25),
                median: quantile(&v, 0.5),
                q3: quantile(&v, 0.75),
                max: v[v.len() - 1],
            }
        })
        .collect()
}

pub fn run_optimize(spec: &OptimizeSpec, checkpoint: Option<&Path>) -> Result<OptimizeReport> {
    let net = spec.network.build()?;
    let config = spec.config(&net)?;
    let run = run_genetic_with_checkpoint(&net, &config, spec.seed, checkpoint)?;
    let summary = summarize_pool(&run.pool);
    Ok(OptimizeReport { best: run.best, history: run.history, pool: run.pool, summary })
}
