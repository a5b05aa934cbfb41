use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{NetworkSpec, SimSettings};
use crate::error::{Error, Result};
use crate::network::{reshuffle_couplings, ExcitationNetwork};
use crate::noise::NoiseProfile;
use crate::rng::{stream, Purpose};
use crate::scm::Simulator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ReshuffleNoise {
    /// Same rate and shape on every node.
    Homogeneous { zeta: f64, shape: f64, theta: f64 },
    Profile { profile: NoiseProfile },
}

impl ReshuffleNoise {
    pub fn profile(&self, n: usize) -> Result<NoiseProfile> {
        match self {
            Self::Homogeneous { zeta, shape, theta } => NoiseProfile::homogeneous(n, *zeta, *shape, *theta),
            Self::Profile { profile } => {
                if profile.n_nodes() != n {
                    return Err(Error::InvalidConfig(format!(
                        "noise profile covers {} nodes, network has {n}",
                        profile.n_nodes()
                    )));
                }
                profile.validate()?;
                Ok(profile.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReshuffleSpec {
    pub network: NetworkSpec,
    pub samples: usize,
    pub noise: ReshuffleNoise,
    pub settings: SimSettings,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReshuffleResult {
    pub baseline: f64,
    pub epsilons: Vec<f64>,
    /// Fraction of sampled networks with `ε` strictly above the baseline.
    pub outperform_fraction: f64,
}

impl ReshuffleResult {
    fn new(baseline: f64, epsilons: Vec<f64>) -> Self {
        let better = epsilons.iter().filter(|&&e| e > baseline).count();
        let outperform_fraction = better as f64 / epsilons.len().max(1) as f64;
        Self { baseline, epsilons, outperform_fraction }
    }

    /// `bins` equal-width bins over the observed range, as
    /// `(lower edge, upper edge, count)`.
    pub fn histogram(&self, bins: usize) -> Vec<(f64, f64, usize)> {
        let bins = bins.max(1);
        let lo = self.epsilons.iter().copied().fold(f64::INFINITY, f64::min).min(self.baseline);
        let hi = self.epsilons.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(self.baseline);
        let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
        let mut counts = vec![0usize; bins];
        for &e in &self.epsilons {
            let b = (((e - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        counts.into_iter().enumerate().map(|(b, c)| (lo + b as f64 * width, lo + (b + 1) as f64 * width, c)).collect()
    }
}

/// Performance of every network under the same noise profile and the same
/// collision streams.
pub fn evaluate_networks(
    nets: &[ExcitationNetwork],
    profile: &NoiseProfile,
    settings: &SimSettings,
    seed: u64,
) -> Result<Vec<f64>> {
    settings.validate()?;
    let grid = settings.grid()?;
    nets.par_iter()
        .map(|net| {
            let sim = Simulator::new(net, profile)?;
            let r = sim.ensemble_performance(&grid, settings.n_traj, seed, settings.threshold, settings.per_trajectory)?;
            Ok(match r.per_trajectory {
                Some(p) => p.mean_epsilon,
                None => r.performance.epsilon,
            })
        })
        .collect()
}

/// Compares `M` networks with randomly reshuffled couplings against the
/// original network.
pub fn run_reshuffle(spec: &ReshuffleSpec) -> Result<ReshuffleResult> {
    if spec.samples == 0 {
        return Err(Error::InvalidConfig("sample count must be at least 1".into()));
    }
    let net = spec.network.build()?;
    let profile = spec.noise.profile(net.n_sites())?;
    let mut nets = vec![net.clone()];
    for m in 0..spec.samples as u64 {
        nets.push(reshuffle_couplings(&net, &mut stream(spec.seed, Purpose::Reshuffle, m, 0)));
    }
    let eps = evaluate_networks(&nets, &profile, &spec.settings, spec.seed)?;
    Ok(ReshuffleResult::new(eps[0], eps[1..].to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::permute_couplings;

    fn settings() -> SimSettings {
        SimSettings { n_traj: 16, t_max: 2.0, n_points: 201, ..SimSettings::default() }
    }

    #[test]
    fn identity_permutation_never_outperforms() {
        let net = NetworkSpec::fmo().build().unwrap();
        let same = permute_couplings(&net, &(0..28).collect::<Vec<_>>()).unwrap();
        let profile = NoiseProfile::homogeneous(8, 100.0, 1.0, std::f64::consts::FRAC_PI_2).unwrap();
        let eps = evaluate_networks(&[net, same], &profile, &settings(), 4).unwrap();
        assert!(eps[0] > 0.0);
        let r = ReshuffleResult::new(eps[0], eps[1..].to_vec());
        assert_eq!(r.outperform_fraction, 0.0);
    }

    #[test]
    fn reshuffle_run() {
        let spec = ReshuffleSpec {
            network: NetworkSpec::fmo(),
            samples: 6,
            noise: ReshuffleNoise::Homogeneous { zeta: 100.0, shape: 1.0, theta: std::f64::consts::FRAC_PI_2 },
            settings: settings(),
            seed: 9,
        };
        let r = run_reshuffle(&spec).unwrap();
        assert_eq!(r.epsilons.len(), 6);
        assert_eq!(r, run_reshuffle(&spec).unwrap());
        let h = r.histogram(4);
        assert_eq!(h.iter().map(|b| b.2).sum::<usize>(), 6);
        assert!(run_reshuffle(&ReshuffleSpec { samples: 0, ..spec }).is_err());
    }
}
