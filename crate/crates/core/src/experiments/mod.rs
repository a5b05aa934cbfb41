//! Experiment drivers: rate sweeps, interaction-strength sweeps, noise
//! optimization and coupling reshuffling, plus their CSV and manifest
//! output.

mod optimize;
mod output;
mod reshuffle;
mod sweep;
mod validate;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{TimeGrid, DEFAULT_POINTS};
use crate::metrics::DEFAULT_THRESHOLD;
use crate::network::{
    fmo7_network, fmo_network, fully_connected, path_network, ExcitationNetwork, DEFAULT_FC_SINK_RATE,
    DEFAULT_FMO_SINK_RATE,
};
use crate::noise::NoiseProfile;

pub use optimize::{run_optimize, summarize_pool, OptimizeReport, OptimizeSpec, ParameterSummary};
pub use output::{read_csv, sha256_file, write_columns, write_csv, Artifact, RunManifest};
pub use reshuffle::{evaluate_networks, run_reshuffle, ReshuffleNoise, ReshuffleResult, ReshuffleSpec};
pub use sweep::{run_sweep, run_theta_sweep, SweepRow, SweepSpec, ThetaPeak, ThetaSweep};
pub use validate::{run_validation, ValidationCheck, ValidationSpec};

pub const DEFAULT_SWEEP_POINTS: usize = 60;
pub const DEFAULT_TRAJECTORIES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Fc,
    Fmo,
    Fmo7,
    Path,
}

impl std::str::FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fc" => Ok(Self::Fc),
            "fmo" => Ok(Self::Fmo),
            "fmo7" => Ok(Self::Fmo7),
            "path" => Ok(Self::Path),
            _ => Err(Error::InvalidConfig(format!("unknown network '{s}' (expected fc, fmo, fmo7 or path)"))),
        }
    }
}

/// Which network to build. `sites` and `coupling` apply to the fc and path
/// families; a `file` overrides everything else.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkSpec {
    pub kind: NetworkKind,
    pub sites: usize,
    pub coupling: f64,
    pub sink_rate: Option<f64>,
    pub file: Option<PathBuf>,
}

impl Default for NetworkSpec {
    fn default() -> Self {
        Self { kind: NetworkKind::Fc, sites: 20, coupling: 1.0, sink_rate: None, file: None }
    }
}

impl NetworkSpec {
    pub fn fc(sites: usize) -> Self {
        Self { sites, ..Self::default() }
    }

    pub fn fmo() -> Self {
        Self { kind: NetworkKind::Fmo, ..Self::default() }
    }

    pub fn build(&self) -> Result<ExcitationNetwork> {
        if let Some(path) = &self.file {
            let net = ExcitationNetwork::load(path)?;
            return match self.sink_rate {
                Some(g) => net.with_sink_rate(g),
                None => Ok(net),
            };
        }
        match self.kind {
            NetworkKind::Fc => {
                let g = self.sink_rate.unwrap_or(DEFAULT_FC_SINK_RATE);
                fully_connected(self.sites, self.coupling, 0, self.sites.saturating_sub(1), g)
            }
            NetworkKind::Path => path_network(self.sites, self.coupling, self.sink_rate.unwrap_or(DEFAULT_FC_SINK_RATE)),
            NetworkKind::Fmo => fmo_network(self.sink_rate.unwrap_or(DEFAULT_FMO_SINK_RATE)),
            NetworkKind::Fmo7 => fmo7_network(self.sink_rate.unwrap_or(DEFAULT_FMO_SINK_RATE)),
        }
    }
}

/// Which nodes receive collisions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoisePattern {
    Homogeneous,
    /// The initial node only.
    Localized,
    /// 1-based node labels.
    Mask(Vec<usize>),
}

impl std::str::FromStr for NoisePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homogeneous" => Ok(Self::Homogeneous),
            "localized" => Ok(Self::Localized),
            _ => {
                let list = s.strip_prefix("mask=").ok_or_else(|| {
                    Error::InvalidConfig(format!("unknown pattern '{s}' (expected homogeneous, localized or mask=1,2,...)"))
                })?;
                let nodes = list
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::InvalidConfig(format!("bad node label '{t}' in mask")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::Mask(nodes))
            }
        }
    }
}

impl NoisePattern {
    pub fn mask(&self, net: &ExcitationNetwork) -> Result<Vec<bool>> {
        let n = net.n_sites();
        match self {
            Self::Homogeneous => Ok(vec![true; n]),
            Self::Localized => Ok((0..n).map(|i| i == net.initial_node()).collect()),
            Self::Mask(nodes) => {
                let mut m = vec![false; n];
                for &label in nodes {
                    if label == 0 || label > n {
                        return Err(Error::InvalidConfig(format!("mask node {label} outside 1..={n}")));
                    }
                    m[label - 1] = true;
                }
                Ok(m)
            }
        }
    }

    pub fn profile(&self, net: &ExcitationNetwork, rate: f64, shape: f64, theta: f64) -> Result<NoiseProfile> {
        NoiseProfile::masked(&self.mask(net)?, rate, shape, theta)
    }
}

/// Logarithmically spaced rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl LogGrid {
    pub fn validate(&self) -> Result<()> {
        let ok = self.min > 0.0
            && self.max.is_finite()
            && self.points >= 1
            && (self.max > self.min || (self.points == 1 && self.max == self.min));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "rate grid must be positive and increasing, got {}..{} with {} points",
                self.min, self.max, self.points
            )))
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let (a, b) = (self.min.ln(), self.max.ln());
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|j| match j {
                0 => self.min,
                _ if j == self.points - 1 => self.max,
                _ => (a + (b - a) * j as f64 / last).exp(),
            })
            .collect()
    }
}

/// Ensemble size, time grid and threshold shared by all experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimSettings {
    pub n_traj: usize,
    pub t_max: f64,
    pub n_points: usize,
    pub threshold: f64,
    /// Report the mean of per-trajectory performances instead of the
    /// performance of the mean curve.
    pub per_trajectory: bool,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            n_traj: DEFAULT_TRAJECTORIES,
            t_max: 100.0,
            n_points: DEFAULT_POINTS,
            threshold: DEFAULT_THRESHOLD,
            per_trajectory: false,
        }
    }
}

impl SimSettings {
    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.t_max, self.n_points)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        if self.n_traj == 0 {
            return Err(Error::InvalidConfig("n_traj must be positive".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidConfig(format!("threshold must lie in (0, 1), got {}", self.threshold)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_endpoints_are_exact() {
        let g = LogGrid { min: 0.1, max: 1000.0, points: 5 };
        let v = g.values();
        assert_eq!(v.len(), 5);
        assert_eq!((v[0], v[4]), (0.1, 1000.0));
        assert!((v[2] - 10.0).abs() < 1e-12);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        assert!(LogGrid { min: 0.0, max: 1.0, points: 3 }.validate().is_err());
        assert!(LogGrid { min: 2.0, max: 1.0, points: 3 }.validate().is_err());
        assert!(LogGrid { min: 1.0, max: 1.0, points: 1 }.validate().is_ok());
    }

    #[test]
    fn patterns_parse_and_validate() {
        let net = NetworkSpec::fmo().build().unwrap();
        assert_eq!("homogeneous".parse::<NoisePattern>().unwrap().mask(&net).unwrap(), vec![true; 8]);
        let loc = "localized".parse::<NoisePattern>().unwrap().mask(&net).unwrap();
        assert_eq!(loc.iter().position(|&m| m), Some(0));
        let m = "mask=1,3,6".parse::<NoisePattern>().unwrap().mask(&net).unwrap();
        assert_eq!(m, vec![true, false, true, false, false, true, false, false]);
        assert!("mask=0".parse::<NoisePattern>().unwrap().mask(&net).is_err());
        assert!("mask=9".parse::<NoisePattern>().unwrap().mask(&net).is_err());
        assert!("mask=a".parse::<NoisePattern>().is_err());
        assert!("sideways".parse::<NoisePattern>().is_err());
    }

    #[test]
    fn network_specs() {
        assert_eq!(NetworkSpec::fc(20).build().unwrap().n_sites(), 20);
        assert_eq!("fmo7".parse::<NetworkKind>().unwrap(), NetworkKind::Fmo7);
        assert!("ring".parse::<NetworkKind>().is_err());
        let spec: NetworkSpec = serde_json::from_str(r#"{"kind": "path", "sites": 5}"#).unwrap();
        let net = spec.build().unwrap();
        assert_eq!((net.n_sites(), net.sink_rate()), (5, DEFAULT_FC_SINK_RATE));
    }
}
