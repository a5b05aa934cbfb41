//! Genetic search over per-node noise parameters.
//!
//! A chromosome vector holds `2N` genes, `[ζ_1, k_1, ζ_2, k_2, ...]`: mean
//! collision rate and Weibull shape for every node.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::metrics::DEFAULT_THRESHOLD;
use crate::network::{single_excitation_hamiltonian, ExcitationNetwork};
use crate::noise::NoiseProfile;
use crate::propagation::Propagator;
use crate::rng::{derive_seed, stream, Purpose};
use crate::scm::Simulator;

/// Simulation settings behind one fitness value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessSettings {
    pub grid: TimeGrid,
    pub n_traj: usize,
    pub theta: f64,
    pub threshold: f64,
    /// Average per-trajectory performances instead of using the mean curve.
    #[serde(default)]
    pub per_trajectory: bool,
}

impl FitnessSettings {
    pub fn new(grid: TimeGrid, n_traj: usize, theta: f64) -> Self {
        Self { grid, n_traj, theta, threshold: DEFAULT_THRESHOLD, per_trajectory: false }
    }

    /// Hex digest identifying the network and these settings.
    pub fn key(&self, net: &ExcitationNetwork) -> String {
        digest(&(net.to_file(), self))
    }
}

fn digest<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("settings serialize");
    hex::encode(Sha256::digest(json))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genes: Vec<f64>,
    pub fitness: Option<f64>,
    /// Key of the settings the cached fitness was computed with.
    pub settings_key: Option<String>,
}

impl Individual {
    pub fn new(genes: Vec<f64>) -> Self {
        Self { genes, fitness: None, settings_key: None }
    }

    /// Builds the chromosome vector from per-node rates and shapes.
    pub fn from_profile(rates: &[f64], shapes: &[f64]) -> Self {
        Self::new(rates.iter().zip(shapes).flat_map(|(&z, &k)| [z, k]).collect())
    }

    pub fn n_nodes(&self) -> usize {
        self.genes.len() / 2
    }

    pub fn rates(&self) -> Vec<f64> {
        self.genes.iter().step_by(2).copied().collect()
    }

    pub fn shapes(&self) -> Vec<f64> {
        self.genes.iter().skip(1).step_by(2).copied().collect()
    }

    pub fn profile(&self, theta: f64) -> Result<NoiseProfile> {
        NoiseProfile::new(self.rates(), self.shapes(), theta)
    }

    /// Cached fitness, or 0 when unevaluated.
    pub fn score(&self) -> f64 {
        self.fitness.filter(|f| f.is_finite()).unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MutationMode {
    Additive,
    Multiplicative,
    Hybrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneticConfig {
    pub pool_size: usize,
    pub parent_count: usize,
    pub mutation_mode: MutationMode,
    /// Standard deviation of the Gaussian behind every mutation.
    pub mutation_scale: f64,
    /// Additive steps are `mutation_scale * unit`, with one unit for rate
    /// genes and one for shape genes.
    pub additive_units: [f64; 2],
    /// Box constraint `[lo, hi]` for every gene.
    pub bounds: Vec<[f64; 2]>,
    /// Log-uniform sampling range of the first generation, per gene.
    pub init_ranges: Vec<[f64; 2]>,
    pub plateau_window: usize,
    /// Relative improvement of the best fitness over the plateau window
    /// below which the run stops.
    pub plateau_tolerance: f64,
    pub min_generations: usize,
    pub max_generations: usize,
    /// Draw a new evaluation seed every generation. With `false` every
    /// generation is evaluated on the same noise realizations.
    pub reseed_each_generation: bool,
    pub settings: FitnessSettings,
}

pub const DEFAULT_POOL: usize = 40;
pub const DEFAULT_MUTATION_SCALE: f64 = 0.3;

impl GeneticConfig {
    /// Defaults for `net`: rates sampled in `[1e-2, 1e3]·g` and shapes in
    /// `[0.3, 30]`, where `g` is the mean coupling magnitude.
    pub fn for_network(net: &ExcitationNetwork, settings: FitnessSettings) -> Self {
        let g = net.coupling_scale();
        let n = net.n_sites();
        let mut bounds = Vec::with_capacity(2 * n);
        let mut init_ranges = Vec::with_capacity(2 * n);
        for _ in 0..n {
            bounds.push([0.0, 1e3 * g]);
            bounds.push([0.1, 100.0]);
            init_ranges.push([1e-2 * g, 1e3 * g]);
            init_ranges.push([0.3, 30.0]);
        }
        Self {
            pool_size: DEFAULT_POOL,
            parent_count: DEFAULT_POOL / 2,
            mutation_mode: MutationMode::Hybrid,
            mutation_scale: DEFAULT_MUTATION_SCALE,
            additive_units: [g, 1.0],
            bounds,
            init_ranges,
            plateau_window: 10,
            plateau_tolerance: 1e-3,
            min_generations: 0,
            max_generations: 100,
            reseed_each_generation: true,
            settings,
        }
    }

    /// Pins gene `index` to `value` (bounds and initial range collapse).
    pub fn freeze(&mut self, index: usize, value: f64) {
        self.bounds[index] = [value, value];
        self.init_ranges[index] = [value, value];
    }

    pub fn offspring_count(&self) -> usize {
        self.pool_size - self.parent_count
    }

    pub fn validate(&self, n_nodes: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.pool_size < 2 || self.parent_count * 2 != self.pool_size {
            return bad(format!(
                "parent count must be half the pool size, got {} of {}",
                self.parent_count, self.pool_size
            ));
        }
        if self.bounds.len() != 2 * n_nodes || self.init_ranges.len() != 2 * n_nodes {
            return bad(format!("expected {} gene bounds", 2 * n_nodes));
        }
        for (i, ([lo, hi], [a, b])) in self.bounds.iter().zip(&self.init_ranges).enumerate() {
            let shape_gene = i % 2 == 1;
            let min = if shape_gene { f64::MIN_POSITIVE } else { 0.0 };
            if !(lo.is_finite() && hi.is_finite() && *lo >= min && lo <= hi) {
                return bad(format!("gene {i}: invalid bounds [{lo}, {hi}]"));
            }
            if !(a.is_finite() && b.is_finite() && a <= b && (*a > 0.0 || a == b)) {
                return bad(format!("gene {i}: invalid initial range [{a}, {b}]"));
            }
        }
        if !(self.mutation_scale >= 0.0) || !self.mutation_scale.is_finite() {
            return bad("mutation scale must be finite and >= 0".into());
        }
        if self.settings.n_traj == 0 {
            return bad("fitness needs at least one trajectory".into());
        }
        if !(self.settings.threshold > 0.0 && self.settings.threshold < 1.0) {
            return bad("threshold must lie in (0, 1)".into());
        }
        if self.max_generations == 0 {
            return bad("max_generations must be positive".into());
        }
        Ok(())
    }

    fn clamp(&self, genes: &mut [f64]) {
        for (x, [lo, hi]) in genes.iter_mut().zip(&self.bounds) {
            *x = x.clamp(*lo, *hi);
        }
    }

    /// Identifies everything except the stopping rule, so a finished run
    /// can be extended from its checkpoint.
    fn key(&self, net: &ExcitationNetwork) -> String {
        let mut c = self.clone();
        c.plateau_window = 0;
        c.plateau_tolerance = 0.0;
        c.min_generations = 0;
        c.max_generations = 0;
        digest(&(net.to_file(), c))
    }
}

/// Ensemble performance of `ind` on `net`, seeded with `seed`. Failed
/// simulations score 0.
pub fn evaluate_fitness(ind: &Individual, net: &ExcitationNetwork, settings: &FitnessSettings, seed: u64) -> f64 {
    match Propagator::new(&single_excitation_hamiltonian(net)) {
        Ok(p) => fitness_with(ind, net, &p, settings, seed),
        Err(e) => {
            log::warn!("fitness evaluation failed: {e}");
            0.0
        }
    }
}

fn fitness_with(
    ind: &Individual,
    net: &ExcitationNetwork,
    propagator: &Propagator,
    settings: &FitnessSettings,
    seed: u64,
) -> f64 {
    let run = || -> Result<f64> {
        let profile = ind.profile(settings.theta)?;
        let sim = Simulator::with_propagator(net, &profile, propagator.clone())?;
        let r = sim.ensemble_performance(&settings.grid, settings.n_traj, seed, settings.threshold, settings.per_trajectory)?;
        Ok(match r.per_trajectory {
            Some(p) => p.mean_epsilon,
            None => r.performance.epsilon,
        })
    };
    match run() {
        Ok(f) => f,
        Err(e) => {
            log::warn!("fitness evaluation failed: {e}");
            0.0
        }
    }
}

/// Indices of the `count` fittest individuals, best first; ties go to the
/// lower index.
pub fn select_parents(pool: &[Individual], count: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| pool[b].score().total_cmp(&pool[a].score()).then(a.cmp(&b)));
    order.truncate(count);
    order
}

/// Child taking a uniformly random half of the gene positions from `p1`
/// and the rest from `p2`.
pub fn crossover<R: Rng + ?Sized>(p1: &Individual, p2: &Individual, rng: &mut R) -> Result<Individual> {
    if p1.genes.len() != p2.genes.len() {
        return Err(Error::InvalidConfig(format!(
            "parents have {} and {} genes",
            p1.genes.len(),
            p2.genes.len()
        )));
    }
    let len = p1.genes.len();
    let mut from_first = vec![false; len];
    for i in rand::seq::index::sample(rng, len, len / 2) {
        from_first[i] = true;
    }
    let genes = (0..len).map(|i| if from_first[i] { p1.genes[i] } else { p2.genes[i] }).collect();
    Ok(Individual::new(genes))
}

pub fn mutate<R: Rng + ?Sized>(ind: &Individual, rng: &mut R, config: &GeneticConfig) -> Individual {
    let sigma = config.mutation_scale;
    let mut genes = ind.genes.clone();
    if sigma == 0.0 {
        return Individual { genes, ..ind.clone() };
    }
    for (i, x) in genes.iter_mut().enumerate() {
        let z: f64 = rng.sample(StandardNormal);
        let additive = match config.mutation_mode {
            MutationMode::Additive => true,
            MutationMode::Multiplicative => false,
            MutationMode::Hybrid => rng.random_bool(0.5),
        };
        if additive {
            *x += sigma * z * config.additive_units[i % 2];
        } else {
            *x *= (sigma * z).exp();
        }
    }
    config.clamp(&mut genes);
    Individual::new(genes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub median: f64,
    pub mean: f64,
    /// Fitness evaluations run in this generation.
    pub evaluations: usize,
    pub eval_seed: u64,
}

/// Resumable optimizer state, written after every generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneticCheckpoint {
    pub seed: u64,
    pub config_key: String,
    pub generation: usize,
    pub pool: Vec<Individual>,
    pub history: Vec<GenerationStats>,
    pub finished: bool,
}

impl GeneticCheckpoint {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let tmp = path.with_extension("tmp");
        serde_json::to_writer_pretty(std::io::BufWriter::new(std::fs::File::create(&tmp)?), self)?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneticRun {
    pub best: Individual,
    /// Final pool, best first.
    pub pool: Vec<Individual>,
    pub history: Vec<GenerationStats>,
}

fn eval_seed(config: &GeneticConfig, seed: u64, generation: usize) -> u64 {
    let g = if config.reseed_each_generation { generation as u64 } else { 0 };
    derive_seed(seed, Purpose::Genetic, g)
}

fn initial_pool(config: &GeneticConfig, seed: u64) -> Vec<Individual> {
    let mut rng = stream(seed, Purpose::Genetic, 0, 0);
    (0..config.pool_size)
        .map(|_| {
            let mut genes: Vec<f64> = config
                .init_ranges
                .iter()
                .map(|&[a, b]| if a == b { a } else { (rng.random_range(a.ln()..b.ln())).exp() })
                .collect();
            config.clamp(&mut genes);
            Individual::new(genes)
        })
        .collect()
}

fn evaluate_pool(
    pool: &mut [Individual],
    net: &ExcitationNetwork,
    propagator: &Propagator,
    settings: &FitnessSettings,
    key: &str,
    seed: u64,
) -> usize {
    let todo: Vec<usize> = (0..pool.len())
        .filter(|&i| pool[i].fitness.is_none() || pool[i].settings_key.as_deref() != Some(key))
        .collect();
    let scores: Vec<f64> = todo.par_iter().map(|&i| fitness_with(&pool[i], net, propagator, settings, seed)).collect();
    for (&i, f) in todo.iter().zip(scores) {
        pool[i].fitness = Some(f);
        pool[i].settings_key = Some(key.to_owned());
    }
    todo.len()
}

fn stats(pool: &[Individual], generation: usize, evaluations: usize, eval_seed: u64) -> GenerationStats {
    let mut f: Vec<f64> = pool.iter().map(Individual::score).collect();
    f.sort_by(f64::total_cmp);
    let n = f.len();
    let median = if n % 2 == 1 { f[n / 2] } else { 0.5 * (f[n / 2 - 1] + f[n / 2]) };
    GenerationStats {
        generation,
        best: f[n - 1],
        median,
        mean: f.iter().sum::<f64>() / n as f64,
        evaluations,
        eval_seed,
    }
}

fn plateaued(config: &GeneticConfig, history: &[GenerationStats]) -> bool {
    let g = history.len() - 1;
    if g + 1 >= config.max_generations {
        return true;
    }
    if g < config.min_generations.max(config.plateau_window) {
        return false;
    }
    let old = history[g - config.plateau_window].best;
    history[g].best - old <= config.plateau_tolerance * old.abs()
}

/// Runs the genetic search on `net`.
pub fn run_genetic(net: &ExcitationNetwork, config: &GeneticConfig, seed: u64) -> Result<GeneticRun> {
    run_genetic_with_checkpoint(net, config, seed, None)
}

/// Like [`run_genetic`], saving state to `checkpoint` after every
/// generation and resuming from it when the file already exists.
pub fn run_genetic_with_checkpoint(
    net: &ExcitationNetwork,
    config: &GeneticConfig,
    seed: u64,
    checkpoint: Option<&Path>,
) -> Result<GeneticRun> {
    config.validate(net.n_sites())?;
    let propagator = Propagator::new(&single_excitation_hamiltonian(net))?;
    let settings_key = config.settings.key(net);
    let config_key = config.key(net);

    let resumed = match checkpoint {
        Some(p) if p.exists() => {
            let c = GeneticCheckpoint::load(p)?;
            if c.seed != seed || c.config_key != config_key {
                return Err(Error::Checkpoint(format!(
                    "{} was written by a run with a different seed or configuration",
                    p.display()
                )));
            }
            Some(c)
        }
        _ => None,
    };

    let (mut pool, mut history, mut finished) = match resumed {
        Some(c) => (c.pool, c.history, false),
        None => {
            let mut pool = initial_pool(config, seed);
            let s = eval_seed(config, seed, 0);
            let evals = evaluate_pool(&mut pool, net, &propagator, &config.settings, &settings_key, s);
            let first = stats(&pool, 0, evals, s);
            (pool, vec![first], false)
        }
    };

    let save = |pool: &[Individual], history: &[GenerationStats], finished: bool| -> Result<()> {
        if let Some(p) = checkpoint {
            GeneticCheckpoint {
                seed,
                config_key: config_key.clone(),
                generation: history.len() - 1,
                pool: pool.to_vec(),
                history: history.to_vec(),
                finished,
            }
            .save(p)?;
        }
        Ok(())
    };

    while !finished {
        finished = plateaued(config, &history);
        if finished {
            save(&pool, &history, true)?;
            break;
        }
        save(&pool, &history, false)?;
        let g = history.len();
        log::info!("generation {}: best {:.6e}", g - 1, history[g - 1].best);

        let parents: Vec<Individual> =
            select_parents(&pool, config.parent_count).into_iter().map(|i| pool[i].clone()).collect();
        let mut rng = stream(seed, Purpose::Genetic, g as u64, 1);
        let mut order: Vec<usize> = (0..parents.len()).collect();
        order.shuffle(&mut rng);
        let mut next = parents.clone();
        for j in 0..config.offspring_count() {
            let a = &parents[order[j % order.len()]];
            let b = &parents[order[(j + 1) % order.len()]];
            let child = crossover(a, b, &mut rng)?;
            next.push(mutate(&child, &mut rng, config));
        }
        let s = eval_seed(config, seed, g);
        let evals = evaluate_pool(&mut next, net, &propagator, &config.settings, &settings_key, s);
        pool = next;
        history.push(stats(&pool, g, evals, s));
    }

    let ranked: Vec<Individual> =
        select_parents(&pool, pool.len()).into_iter().map(|i| pool[i].clone()).collect();
    Ok(GeneticRun { best: ranked[0].clone(), pool: ranked, history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fully_connected;
    use std::f64::consts::PI;

    fn scored(f: &[f64]) -> Vec<Individual> {
        f.iter()
            .map(|&x| Individual { genes: vec![1.0, 1.0], fitness: Some(x), settings_key: None })
            .collect()
    }

    fn small_config(net: &ExcitationNetwork) -> GeneticConfig {
        let settings = FitnessSettings::new(TimeGrid::new(20.0, 201).unwrap(), 8, PI / 2.0);
        let mut c = GeneticConfig::for_network(net, settings);
        c.pool_size = 8;
        c.parent_count = 4;
        c.max_generations = 4;
        c
    }

    #[test]
    fn selection_takes_the_top_half() {
        let pool = scored(&[0.1, 0.5, 0.3, 0.9, 0.2, 0.4]);
        assert_eq!(select_parents(&pool, 3), vec![3, 1, 5]);
        let flat = scored(&[0.2; 6]);
        assert_eq!(select_parents(&flat, 3), vec![0, 1, 2]);
    }

    #[test]
    fn crossover_inherits_half_from_each_parent() {
        let mut rng = stream(1, Purpose::Oracle, 0, 0);
        let p1 = Individual::new((0..16).map(|i| i as f64).collect());
        let p2 = Individual::new((0..16).map(|i| -(i as f64) - 1.0).collect());
        assert_eq!(crossover(&p1, &p1, &mut rng).unwrap().genes, p1.genes);
        let mut counts = [0usize; 16];
        let draws = 10_000;
        for _ in 0..draws {
            let c = crossover(&p1, &p2, &mut rng).unwrap();
            assert_eq!(c.genes.iter().filter(|&&x| x >= 0.0).count(), 8);
            for (i, &x) in c.genes.iter().enumerate() {
                assert!(x == p1.genes[i] || x == p2.genes[i]);
                counts[i] += (x == p1.genes[i]) as usize;
            }
        }
        let sigma = (draws as f64 * 0.25).sqrt();
        for c in counts {
            assert!((c as f64 - draws as f64 / 2.0).abs() < 3.0 * sigma, "{c}");
        }
        assert!(crossover(&p1, &Individual::new(vec![1.0; 4]), &mut rng).is_err());
    }

    #[test]
    fn mutation_modes() {
        let net = fully_connected(3, 1.0, 0, 2, 1.0).unwrap();
        let mut config = small_config(&net);
        let mut rng = stream(2, Purpose::Oracle, 0, 0);
        let ind = Individual::new(vec![5.0, 2.0, 0.0, 1.0, 100.0, 0.5]);

        config.mutation_scale = 0.0;
        assert_eq!(mutate(&ind, &mut rng, &config).genes, ind.genes);

        config.mutation_scale = 0.5;
        config.mutation_mode = MutationMode::Multiplicative;
        for _ in 0..200 {
            let m = mutate(&ind, &mut rng, &config);
            assert_eq!(m.genes[2], 0.0);
            assert!(m.genes.iter().all(|&x| x >= 0.0));
            assert!(m.genes[1] > 0.0 && m.genes[3] > 0.0);
        }

        config.mutation_mode = MutationMode::Additive;
        config.mutation_scale = 50.0;
        let mut hit_lower = false;
        for _ in 0..200 {
            let m = mutate(&ind, &mut rng, &config);
            for (x, [lo, hi]) in m.genes.iter().zip(&config.bounds) {
                assert!(x >= lo && x <= hi);
            }
            hit_lower |= m.genes[2] == 0.0;
        }
        assert!(hit_lower);
    }

    #[test]
    fn zero_rates_have_zero_fitness() {
        let net = fully_connected(20, 1.0, 0, 19, 1.0).unwrap();
        let settings = FitnessSettings::new(TimeGrid::new(50.0, 101).unwrap(), 4, PI / 2.0);
        let ind = Individual::from_profile(&[0.0; 20], &[1.0; 20]);
        assert_eq!(evaluate_fitness(&ind, &net, &settings, 1), 0.0);
    }

    #[test]
    fn fitness_is_deterministic() {
        let net = fully_connected(5, 1.0, 0, 4, 1.0).unwrap();
        let settings = FitnessSettings::new(TimeGrid::new(30.0, 301).unwrap(), 20, PI / 2.0);
        let ind = Individual::from_profile(&[1.0; 5], &[2.0; 5]);
        let a = evaluate_fitness(&ind, &net, &settings, 4);
        assert!(a > 0.0);
        assert_eq!(a, evaluate_fitness(&ind.clone(), &net, &settings, 4));
    }

    #[test]
    fn run_keeps_elites_and_is_reproducible() {
        let net = fully_connected(4, 1.0, 0, 3, 1.0).unwrap();
        let config = small_config(&net);
        let run = run_genetic(&net, &config, 11).unwrap();
        assert_eq!(run.history.len(), 4);
        assert_eq!(run.pool.len(), 8);
        for w in run.history.windows(2) {
            assert!(w[1].best >= w[0].best);
            assert_eq!(w[1].evaluations, 4);
        }
        assert_eq!(run.best.score(), run.history.last().unwrap().best);
        assert_eq!(run, run_genetic(&net, &config, 11).unwrap());
    }

    #[test]
    fn converged_pool_is_a_fixed_point() {
        let net = fully_connected(4, 1.0, 0, 3, 1.0).unwrap();
        let mut config = small_config(&net);
        config.mutation_scale = 0.0;
        for i in 0..8 {
            config.freeze(i, if i % 2 == 0 { 0.7 } else { 1.5 });
        }
        let run = run_genetic(&net, &config, 3).unwrap();
        assert!(run.pool.iter().all(|ind| ind.genes == run.best.genes));
    }

    #[test]
    fn inert_noise_plateaus_at_zero() {
        let net = fully_connected(6, 1.0, 0, 5, 1.0).unwrap();
        let mut config = small_config(&net);
        config.settings.theta = 2.0 * PI;
        config.plateau_window = 3;
        config.max_generations = 50;
        let run = run_genetic(&net, &config, 5).unwrap();
        assert_eq!(run.history.len(), 4);
        assert!(run.history.iter().all(|h| h.best == 0.0));
    }

    #[test]
    fn checkpoint_resume_reproduces_the_run() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ga.json");
        let net = fully_connected(4, 1.0, 0, 3, 1.0).unwrap();
        let mut config = small_config(&net);
        let full = run_genetic(&net, &config, 8).unwrap();

        config.max_generations = 2;
        run_genetic_with_checkpoint(&net, &config, 8, Some(&path)).unwrap();
        let ck = GeneticCheckpoint::load(&path).unwrap();
        assert!(ck.finished);
        assert_eq!(ck.generation, 1);

        config.max_generations = 4;
        let resumed = run_genetic_with_checkpoint(&net, &config, 8, Some(&path)).unwrap();
        assert_eq!(resumed, full);

        config.mutation_scale = 0.1;
        assert!(matches!(run_genetic_with_checkpoint(&net, &config, 8, Some(&path)), Err(Error::Checkpoint(_))));
        assert!(matches!(run_genetic_with_checkpoint(&net, &small_config(&net), 9, Some(&path)), Err(Error::Checkpoint(_))));
    }
}
