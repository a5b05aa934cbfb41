use serde::{Deserialize, Serialize};

use super::{LogGrid, NetworkSpec, NoisePattern, SimSettings};
use crate::error::{Error, Result};
use crate::network::{single_excitation_hamiltonian, ExcitationNetwork};
use crate::propagation::Propagator;
use crate::scm::{EnsemblePerformance, Simulator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub network: NetworkSpec,
    pub pattern: NoisePattern,
    pub shapes: Vec<f64>,
    pub theta: f64,
    pub zeta: LogGrid,
    pub settings: SimSettings,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<ExcitationNetwork> {
        let net = self.network.build()?;
        self.pattern.mask(&net)?;
        self.zeta.validate()?;
        self.settings.validate()?;
        if self.shapes.is_empty() || self.shapes.iter().any(|k| !(*k > 0.0) || !k.is_finite()) {
            return Err(Error::InvalidConfig("shape list must be non-empty and positive".into()));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidConfig("theta must be finite".into()));
        }
        Ok(net)
    }
}

/// One `(k, ζ)` point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    pub k: f64,
    pub zeta: f64,
    pub epsilon: f64,
    pub std_error: f64,
    pub reached: bool,
    pub crossing_time: Option<f64>,
}

/// Standard error of `ε` on the mean curve from the standard error of the
/// mean population at the crossing: `δε = ε² δt*` with `δt* = δP / P'`.
fn epsilon_error(run: &EnsemblePerformance, threshold: f64) -> f64 {
    let d = &run.dynamics;
    let Some(t) = run.performance.crossing_time else {
        return 0.0;
    };
    let Some(j) = d.mean.iter().position(|&p| p >= threshold) else {
        return 0.0;
    };
    if j == 0 {
        return 0.0;
    }
    let dt = d.times[j] - d.times[j - 1];
    let slope = (d.mean[j] - d.mean[j - 1]) / dt;
    let w = (t - d.times[j - 1]) / dt;
    let se = (1.0 - w) * d.std_error[j - 1] + w * d.std_error[j];
    let eps = run.performance.epsilon;
    if slope > 0.0 {
        eps * eps * se / slope
    } else {
        0.0
    }
}

fn sweep_with(net: &ExcitationNetwork, propagator: &Propagator, spec: &SweepSpec, theta: f64) -> Result<Vec<SweepRow>> {
    let grid = spec.settings.grid()?;
    let s = &spec.settings;
    let mut rows = Vec::new();
    for &k in &spec.shapes {
        for zeta in spec.zeta.values() {
            let profile = spec.pattern.profile(net, zeta, k, theta)?;
            let sim = Simulator::with_propagator(net, &profile, propagator.clone())?;
            let run = sim.ensemble_performance(&grid, s.n_traj, spec.seed, s.threshold, s.per_trajectory)?;
            let (epsilon, std_error) = match run.per_trajectory {
                Some(p) => (p.mean_epsilon, p.std_error),
                None => (run.performance.epsilon, epsilon_error(&run, s.threshold)),
            };
            log::info!("theta {theta:.4} k {k} zeta {zeta:.6e}: eps {epsilon:.6e} +- {std_error:.2e}");
            rows.push(SweepRow {
                theta,
                k,
                zeta,
                epsilon,
                std_error,
                reached: run.performance.reached,
                crossing_time: run.performance.crossing_time,
            });
        }
    }
    Ok(rows)
}

/// `ε(ζ)` for every shape in the spec. All points share the collision
/// streams of `spec.seed`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let net = spec.validate()?;
    let propagator = Propagator::new(&single_excitation_hamiltonian(&net))?;
    sweep_with(&net, &propagator, spec, spec.theta)
}

/// Highest `ε` of one `(θ, k)` curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaPeak {
    pub theta: f64,
    pub k: f64,
    pub zeta: f64,
    pub epsilon: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSweep {
    pub rows: Vec<SweepRow>,
    pub peaks: Vec<ThetaPeak>,
}

/// Repeats the sweep for every `θ` in `thetas` (each in `(0, 2π)`); the
/// spec's own `θ` is ignored.
pub fn run_theta_sweep(spec: &SweepSpec, thetas: &[f64]) -> Result<ThetaSweep> {
    let net = spec.validate()?;
    if thetas.is_empty() || thetas.iter().any(|&t| !(t > 0.0 && t < std::f64::consts::TAU)) {
        return Err(Error::InvalidConfig("theta values must lie in (0, 2π)".into()));
    }
    let propagator = Propagator::new(&single_excitation_hamiltonian(&net))?;
    let mut rows = Vec::new();
    let mut peaks = Vec::new();
    for &theta in thetas {
        let part = sweep_with(&net, &propagator, spec, theta)?;
        for &k in &spec.shapes {
            let best = part
                .iter()
                .filter(|r| r.k == k)
                .fold(None::<&SweepRow>, |acc, r| match acc {
                    Some(b) if b.epsilon >= r.epsilon => Some(b),
                    _ => Some(r),
                })
                .expect("non-empty grid");
            peaks.push(ThetaPeak { theta, k, zeta: best.zeta, epsilon: best.epsilon, std_error: best.std_error });
        }
        rows.extend(part);
    }
    Ok(ThetaSweep { rows, peaks })
}
