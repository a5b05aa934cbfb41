use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::trajectory::{Simulator, Walker};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::metrics::{interpolate_crossing, performance, PerformanceResult};
use crate::network::ExcitationNetwork;
use crate::noise::NoiseProfile;
use crate::propagation::Scratch;

/// Walkers handed to one parallel task. Fixed so that the work split does
/// not depend on the number of threads.
const CHUNK: usize = 16;

/// Mean sink population over an ensemble of trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleDynamics {
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    pub n_traj: usize,
}

impl EnsembleDynamics {
    pub fn performance(&self, threshold: f64) -> Result<PerformanceResult> {
        performance(&self.times, &self.mean, threshold)
    }
}

/// Statistics of per-trajectory performances `ε_j` (zero for trajectories
/// that never reach the threshold).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPerformance {
    pub mean_epsilon: f64,
    pub std_error: f64,
    pub reached_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsemblePerformance {
    /// Dynamics up to the point where the run stopped.
    pub dynamics: EnsembleDynamics,
    /// Performance of the ensemble-averaged sink curve.
    pub performance: PerformanceResult,
    pub per_trajectory: Option<TrajectoryPerformance>,
    pub collisions: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Run the whole grid.
    Never,
    /// Stop at the first grid point where the mean reaches the threshold.
    Mean(f64),
    /// Stop once the mean and every single trajectory reached the threshold.
    EveryTrajectory(f64),
}

#[derive(Default)]
struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2.max(0.0) / (self.n - 1) as f64 / self.n as f64).sqrt()
        }
    }
}

struct Lockstep {
    dynamics: EnsembleDynamics,
    crossings: Vec<Option<f64>>,
    collisions: u64,
}

impl Simulator {
    /// Mean and standard error of the sink population over `n_traj`
    /// trajectories. Trajectory `j` draws from streams keyed by
    /// `(seed, j, node)`; statistics are reduced in trajectory order, so the
    /// result is bitwise reproducible for any thread count.
    pub fn ensemble(&self, grid: &TimeGrid, n_traj: usize, seed: u64) -> Result<EnsembleDynamics> {
        Ok(self.lockstep(grid, n_traj, seed, StopRule::Never)?.dynamics)
    }

    /// Runs the ensemble only as far as needed to measure its performance.
    ///
    /// The averaged curve agrees bitwise with [`Simulator::ensemble`] on the
    /// points that were simulated.
    pub fn ensemble_performance(
        &self,
        grid: &TimeGrid,
        n_traj: usize,
        seed: u64,
        threshold: f64,
        per_trajectory: bool,
    ) -> Result<EnsemblePerformance> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(Error::InvalidConfig(format!("threshold must lie in (0, 1), got {threshold}")));
        }
        let rule = if per_trajectory { StopRule::EveryTrajectory(threshold) } else { StopRule::Mean(threshold) };
        let run = self.lockstep(grid, n_traj, seed, rule)?;
        let perf = run.dynamics.performance(threshold)?;
        let per_trajectory = per_trajectory.then(|| {
            let mut w = Welford::default();
            for c in &run.crossings {
                w.push(c.map_or(0.0, |t| 1.0 / t));
            }
            TrajectoryPerformance {
                mean_epsilon: w.mean,
                std_error: w.std_error(),
                reached_fraction: run.crossings.iter().filter(|c| c.is_some()).count() as f64 / n_traj as f64,
            }
        });
        Ok(EnsemblePerformance { dynamics: run.dynamics, performance: perf, per_trajectory, collisions: run.collisions })
    }

    fn lockstep(&self, grid: &TimeGrid, n_traj: usize, seed: u64, rule: StopRule) -> Result<Lockstep> {
        if n_traj == 0 {
            return Err(Error::InvalidConfig("ensemble needs at least one trajectory".into()));
        }
        let t_max = grid.t_max();
        let mut walkers: Vec<Walker> = (0..n_traj as u64).map(|j| self.walker(t_max, seed, j)).collect();
        let mut values = vec![0.0f64; n_traj];
        let mut previous = vec![0.0f64; n_traj];
        let mut crossings: Vec<Option<f64>> = vec![None; n_traj];
        let mut dynamics = EnsembleDynamics {
            times: Vec::with_capacity(grid.len()),
            mean: Vec::with_capacity(grid.len()),
            std_error: Vec::with_capacity(grid.len()),
            n_traj,
        };
        let mut t_prev = 0.0;
        for (j, t) in grid.times().enumerate() {
            walkers
                .par_chunks_mut(CHUNK)
                .zip(values.par_chunks_mut(CHUNK))
                .try_for_each(|(ws, vs)| -> Result<()> {
                    let mut scratch = Scratch::default();
                    for (w, v) in ws.iter_mut().zip(vs.iter_mut()) {
                        w.advance_to(self, t, &mut scratch)?;
                        *v = w.sink_population(self);
                    }
                    Ok(())
                })?;
            let mut stats = Welford::default();
            for &v in &values {
                stats.push(v);
            }
            dynamics.times.push(t);
            dynamics.mean.push(stats.mean);
            dynamics.std_error.push(stats.std_error());

            let done = match rule {
                StopRule::Never => false,
                StopRule::Mean(thr) => stats.mean >= thr,
                StopRule::EveryTrajectory(thr) => {
                    for i in 0..n_traj {
                        if crossings[i].is_none() && values[i] >= thr {
                            crossings[i] = Some(if j == 0 {
                                t
                            } else {
                                interpolate_crossing(t_prev, previous[i], t, values[i], thr)
                            });
                        }
                    }
                    stats.mean >= thr && crossings.iter().all(Option::is_some)
                }
            };
            if done {
                break;
            }
            previous.copy_from_slice(&values);
            t_prev = t;
        }
        let collisions = walkers.iter().map(|w| w.collisions()).sum();
        Ok(Lockstep { dynamics, crossings, collisions })
    }
}

/// Ensemble of `n_traj` trajectories seeded with `seed`.
pub fn simulate_ensemble(
    net: &ExcitationNetwork,
    profile: &NoiseProfile,
    grid: &TimeGrid,
    n_traj: usize,
    seed: u64,
) -> Result<EnsembleDynamics> {
    Simulator::new(net, profile)?.ensemble(grid, n_traj, seed)
}
