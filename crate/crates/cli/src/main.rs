//! `scmnet`: command line driver for stochastic collision model experiments.

mod options;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use scmnet_core::experiments::{
    run_optimize, run_reshuffle, run_sweep, run_theta_sweep, run_validation, write_columns, write_csv, Artifact,
    LogGrid, NetworkKind, NoisePattern, OptimizeSpec, ReshuffleNoise, ReshuffleSpec, RunManifest, SweepRow,
    SweepSpec, ValidationSpec, DEFAULT_SWEEP_POINTS,
};
use scmnet_core::optimizer::{DEFAULT_MUTATION_SCALE, DEFAULT_POOL};
use scmnet_core::scm::Simulator;
use scmnet_core::NoiseProfile;

use options::Options;

#[derive(Parser)]
#[command(name = "scmnet", version, about = "Excitation transport under stochastic collision noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ensemble-averaged sink population for one noise setting
    Simulate(Options),
    /// Performance as a function of the collision rate
    Sweep(Options),
    /// Rate sweeps for several interaction strengths
    ThetaSweep(Options),
    /// Genetic optimization of per-node rates and shapes
    Optimize(Options),
    /// Performance of networks with permuted couplings
    Reshuffle(Options),
    /// Cross-checks against exact and master-equation references
    Validate(Options),
}

/// Output directory plus the manifest being assembled.
struct Run {
    dir: PathBuf,
    gnuplot: bool,
    manifest: RunManifest,
}

impl Run {
    fn new(command: &str, opts: &Options, config: &impl Serialize) -> Result<Self> {
        let workers = rayon::current_num_threads();
        let config = serde_json::json!({ "options": opts, "resolved": config });
        Ok(Self {
            dir: opts.out_dir()?,
            gnuplot: opts.gnuplot.unwrap_or(false),
            manifest: RunManifest::new(command, opts.seed(), workers, &config)?,
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let a = write_csv(self.path(name), rows)?;
        self.push(a);
        Ok(())
    }

    fn columns(&mut self, name: &str, header: &str, rows: &[(f64, f64)]) -> Result<()> {
        if self.gnuplot {
            let a = write_columns(self.path(name), header, rows)?;
            self.push(a);
        }
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<()> {
        let path = self.path(name);
        std::fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
        self.push(Artifact::of(&path)?);
        Ok(())
    }

    fn push(&mut self, a: Artifact) {
        log::info!("wrote {}", a.path.display());
        self.manifest.artifacts.push(a);
    }

    fn finish(self) -> Result<()> {
        let path = self.manifest.write(&self.dir)?;
        log::info!("wrote {}", path.display());
        Ok(())
    }
}

fn shapes(opts: &Options) -> Vec<f64> {
    opts.k.clone().unwrap_or_else(|| vec![1.0])
}

fn rate_grid(opts: &Options, g: f64) -> LogGrid {
    LogGrid {
        min: opts.zeta_min.unwrap_or(1e-2 * g),
        max: opts.zeta_max.unwrap_or(1e2 * g),
        points: opts.zeta_points.unwrap_or(DEFAULT_SWEEP_POINTS),
    }
}

fn sweep_spec(opts: &Options) -> Result<SweepSpec> {
    let network = opts.network_spec(NetworkKind::Fc);
    let g = network.build()?.coupling_scale();
    Ok(SweepSpec {
        network,
        pattern: opts.pattern(NoisePattern::Homogeneous)?,
        shapes: shapes(opts),
        theta: opts.theta(),
        zeta: rate_grid(opts, g),
        settings: opts.settings(g, 200.0, 2000),
        seed: opts.seed(),
    })
}

fn curves(run: &mut Run, prefix: &str, rows: &[SweepRow]) -> Result<()> {
    let mut keys: Vec<(f64, f64)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.theta, r.k)) {
            keys.push((r.theta, r.k));
        }
    }
    for (theta, k) in keys {
        let pts: Vec<(f64, f64)> =
            rows.iter().filter(|r| r.theta == theta && r.k == k).map(|r| (r.zeta, r.epsilon)).collect();
        let name = format!("{prefix}_theta{:.4}_k{k}.dat", theta / PI);
        run.columns(&name, &format!("zeta epsilon (theta = {:.4} pi, k = {k})", theta / PI), &pts)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DynamicsRow {
    time: f64,
    sink: f64,
    std_error: f64,
}

#[derive(Serialize)]
struct SimulateSummary {
    zeta: f64,
    k: f64,
    theta: f64,
    n_traj: usize,
    epsilon: f64,
    reached: bool,
    crossing_time: Option<f64>,
    final_sink: f64,
}

fn simulate(opts: &Options) -> Result<()> {
    let network = opts.network_spec(NetworkKind::Fc);
    let net = network.build()?;
    let g = net.coupling_scale();
    let settings = opts.settings(g, 200.0, 2000);
    settings.validate()?;
    let zeta = opts.zeta.unwrap_or(g);
    let k = shapes(opts)[0];
    let theta = opts.theta();
    let pattern = opts.pattern(NoisePattern::Homogeneous)?;
    let profile = pattern.profile(&net, zeta, k, theta)?;
    let config = serde_json::json!({ "network": network, "settings": settings, "profile": profile });
    let mut run = Run::new("simulate", opts, &config)?;

    let sim = Simulator::new(&net, &profile)?;
    let dyn_ = sim.ensemble(&settings.grid()?, settings.n_traj, opts.seed())?;
    let perf = dyn_.performance(settings.threshold)?;
    log::info!("epsilon {:.6e} (crossing {:?})", perf.epsilon, perf.crossing_time);

    let rows: Vec<DynamicsRow> = (0..dyn_.times.len())
        .map(|j| DynamicsRow { time: dyn_.times[j], sink: dyn_.mean[j], std_error: dyn_.std_error[j] })
        .collect();
    run.csv("dynamics.csv", &rows)?;
    let summary = SimulateSummary {
        zeta,
        k,
        theta,
        n_traj: settings.n_traj,
        epsilon: perf.epsilon,
        reached: perf.reached,
        crossing_time: perf.crossing_time,
        final_sink: *dyn_.mean.last().unwrap_or(&0.0),
    };
    run.csv("summary.csv", &[summary])?;
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.time, r.sink)).collect();
    run.columns("dynamics.dat", "time sink", &pts)?;
    run.finish()
}

fn sweep(opts: &Options) -> Result<()> {
    let spec = sweep_spec(opts)?;
    let mut run = Run::new("sweep", opts, &spec)?;
    let rows = run_sweep(&spec)?;
    run.csv("sweep.csv", &rows)?;
    curves(&mut run, "sweep", &rows)?;
    run.finish()
}

fn theta_sweep(opts: &Options) -> Result<()> {
    let spec = sweep_spec(opts)?;
    let thetas = opts.thetas.clone().unwrap_or_else(|| vec![0.25 * PI, 0.5 * PI, 0.75 * PI, 0.9 * PI]);
    let config = serde_json::json!({ "sweep": spec, "thetas": thetas });
    let mut run = Run::new("theta-sweep", opts, &config)?;
    let out = run_theta_sweep(&spec, &thetas)?;
    run.csv("theta_sweep.csv", &out.rows)?;
    run.csv("theta_peaks.csv", &out.peaks)?;
    curves(&mut run, "theta_sweep", &out.rows)?;
    run.finish()
}

fn optimize_spec(opts: &Options) -> Result<OptimizeSpec> {
    let network = opts.network_spec(NetworkKind::Fmo);
    let g = network.build()?.coupling_scale();
    let d = OptimizeSpec::default();
    let zeta_init = match (opts.zeta_min, opts.zeta_max) {
        (None, None) => None,
        (a, b) => Some([a.unwrap_or(1e-2 * g), b.unwrap_or(1e3 * g)]),
    };
    Ok(OptimizeSpec {
        network,
        settings: opts.settings(g, 50.0, 500),
        theta: opts.theta(),
        seed: opts.seed(),
        pool_size: opts.pool.unwrap_or(DEFAULT_POOL),
        max_generations: opts.generations.unwrap_or(d.max_generations),
        min_generations: opts.min_generations.unwrap_or(d.min_generations),
        plateau_window: opts.plateau_window.unwrap_or(d.plateau_window),
        plateau_tolerance: opts.plateau_tol.unwrap_or(d.plateau_tolerance),
        mutation_mode: opts.mutation.unwrap_or(d.mutation_mode),
        mutation_scale: opts.mutation_scale.unwrap_or(DEFAULT_MUTATION_SCALE),
        zeta_init,
        zeta_max: opts.zeta_bound,
        ..d
    })
}

fn optimize(opts: &Options) -> Result<()> {
    let spec = optimize_spec(opts)?;
    let mut run = Run::new("optimize", opts, &spec)?;
    let checkpoint = opts.checkpoint.clone().unwrap_or_else(|| run.path("checkpoint.json"));
    let report = run_optimize(&spec, Some(&checkpoint))?;
    run.csv("generations.csv", &report.history)?;
    run.csv("parameters.csv", &report.summary)?;
    let best = report.best.profile(spec.theta)?;
    log::info!("best fitness {:.6e}", report.best.score());
    run.json("best_profile.json", &best)?;
    let pts: Vec<(f64, f64)> = report.history.iter().map(|h| (h.generation as f64, h.best)).collect();
    run.columns("generations.dat", "generation best", &pts)?;
    run.finish()
}

#[derive(Serialize)]
struct ReshuffleRow {
    index: usize,
    epsilon: f64,
    outperforms: bool,
}

#[derive(Serialize)]
struct HistogramRow {
    lower: f64,
    upper: f64,
    count: usize,
}

#[derive(Serialize)]
struct ReshuffleSummary {
    samples: usize,
    baseline: f64,
    outperform_fraction: f64,
}

fn load_profile(path: &Path) -> Result<NoiseProfile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing noise profile {}", path.display()))
}

fn reshuffle(opts: &Options) -> Result<()> {
    let network = opts.network_spec(NetworkKind::Fmo);
    let g = network.build()?.coupling_scale();
    let noise = match &opts.noise_profile {
        Some(p) => ReshuffleNoise::Profile { profile: load_profile(p)? },
        None => ReshuffleNoise::Homogeneous {
            zeta: opts.zeta.unwrap_or(5.0 * g),
            shape: shapes(opts)[0],
            theta: opts.theta(),
        },
    };
    let spec = ReshuffleSpec {
        network,
        samples: opts.samples.unwrap_or(1000),
        noise,
        settings: opts.settings(g, 50.0, 500),
        seed: opts.seed(),
    };
    let mut run = Run::new("reshuffle", opts, &spec)?;
    let res = run_reshuffle(&spec)?;
    log::info!("baseline {:.6e}, outperform fraction {:.4}", res.baseline, res.outperform_fraction);
    let rows: Vec<ReshuffleRow> = res
        .epsilons
        .iter()
        .enumerate()
        .map(|(index, &epsilon)| ReshuffleRow { index, epsilon, outperforms: epsilon > res.baseline })
        .collect();
    run.csv("reshuffle.csv", &rows)?;
    let hist = res.histogram(30);
    let hrows: Vec<HistogramRow> =
        hist.iter().map(|&(lower, upper, count)| HistogramRow { lower, upper, count }).collect();
    run.csv("histogram.csv", &hrows)?;
    let summary =
        ReshuffleSummary { samples: spec.samples, baseline: res.baseline, outperform_fraction: res.outperform_fraction };
    run.csv("summary.csv", &[summary])?;
    let pts: Vec<(f64, f64)> = hist.iter().map(|&(lo, hi, c)| (0.5 * (lo + hi), c as f64)).collect();
    run.columns("histogram.dat", "epsilon count", &pts)?;
    run.finish()
}

fn validate(opts: &Options) -> Result<bool> {
    let d = ValidationSpec::default();
    let spec = ValidationSpec {
        sites: opts.sites.unwrap_or(d.sites),
        zeta: opts.zeta.unwrap_or(d.zeta),
        theta: opts.theta(),
        t_max: opts.tmax.unwrap_or(d.t_max),
        n_points: opts.points.unwrap_or(d.n_points),
        n_traj: opts.ntraj.unwrap_or(d.n_traj),
        seed: opts.seed(),
    };
    if spec.sites < 2 {
        bail!("--sites must be at least 2");
    }
    let mut run = Run::new("validate", opts, &spec)?;
    let checks = run_validation(&spec)?;
    for c in &checks {
        let status = if c.passed { "ok" } else { "FAILED" };
        log::info!("{:<36} {:.3e} (tolerance {:.1e}) {status}", c.name, c.value, c.tolerance);
    }
    run.csv("validation.csv", &checks)?;
    run.finish()?;
    Ok(checks.iter().all(|c| c.passed))
}

fn dispatch(command: Command) -> Result<bool> {
    let (opts, f): (Options, fn(&Options) -> Result<bool>) = match command {
        Command::Simulate(o) => (o, |o| simulate(o).map(|_| true)),
        Command::Sweep(o) => (o, |o| sweep(o).map(|_| true)),
        Command::ThetaSweep(o) => (o, |o| theta_sweep(o).map(|_| true)),
        Command::Optimize(o) => (o, |o| optimize(o).map(|_| true)),
        Command::Reshuffle(o) => (o, |o| reshuffle(o).map(|_| true)),
        Command::Validate(o) => (o, validate),
    };
    let opts = opts.resolve()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = opts.workers {
        if w == 0 {
            bail!("--workers must be at least 1");
        }
        pool = pool.num_threads(w);
    }
    pool.build()?.install(|| f(&opts))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("validation failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
