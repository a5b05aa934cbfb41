//! Network Hamiltonians in the single-excitation subspace.
//!
//! Nodes are 0-based in the API; the JSON file format and the command line
//! use 1-based labels.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// FMO single-excitation Hamiltonian, site energies shifted so that the
/// sink-coupled third site sits at zero.
#[rustfmt::skip]
pub const FMO_HAMILTONIAN: [[f64; 8]; 8] = [
    [200.0, -94.8,   5.5,  -5.9,   7.1, -15.1, -12.2,  39.5],
    [-94.8, 230.0,  29.8,   7.6,   1.6,  13.1,   5.7,   7.9],
    [  5.5,  29.8,   0.0, -58.9,  -1.2,  -9.3,   3.4,   1.4],
    [ -5.9,   7.6, -58.9, 180.0, -64.1, -17.4, -62.3,  -1.6],
    [  7.1,   1.6,  -1.2, -64.1, 405.0,  89.5,  -4.6,   4.4],
    [-15.1,  13.1,  -9.3, -17.4,  89.5, 320.0,  35.1,  -9.1],
    [-12.2,   5.7,   3.4, -62.3,  -4.6,  35.1, 270.0,  11.1],
    [ 39.5,   7.9,   1.4,  -1.6,   4.4,  -9.1,  11.1, 505.0],
];

/// Default sink rate for the fully connected graph, in units of the hopping.
pub const DEFAULT_FC_SINK_RATE: f64 = 3.0;
/// Default sink rate for the FMO models, in the units of the matrix above.
pub const DEFAULT_FMO_SINK_RATE: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationNetwork {
    energies: Vec<f64>,
    /// Row-major `n × n`, symmetric, zero diagonal.
    couplings: Vec<f64>,
    initial: usize,
    sink: usize,
    sink_rate: f64,
}

impl ExcitationNetwork {
    pub fn new(
        energies: Vec<f64>,
        couplings: Vec<f64>,
        initial: usize,
        sink: usize,
        sink_rate: f64,
    ) -> Result<Self> {
        let n = energies.len();
        if n < 2 {
            return Err(Error::InvalidNetwork(format!("need at least 2 sites, got {n}")));
        }
        if couplings.len() != n * n {
            return Err(Error::InvalidNetwork(format!(
                "coupling matrix has {} entries, expected {}",
                couplings.len(),
                n * n
            )));
        }
        if initial >= n || sink >= n {
            return Err(Error::InvalidNetwork(format!(
                "initial node {} / sink node {} out of range for {n} sites",
                initial + 1,
                sink + 1
            )));
        }
        if initial == sink {
            return Err(Error::InvalidNetwork("initial node and sink node coincide".into()));
        }
        if !(sink_rate >= 0.0) || !sink_rate.is_finite() {
            return Err(Error::InvalidNetwork(format!("sink rate must be finite and >= 0, got {sink_rate}")));
        }
        if energies.iter().chain(couplings.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidNetwork("non-finite energy or coupling".into()));
        }
        for i in 0..n {
            if couplings[i * n + i] != 0.0 {
                return Err(Error::InvalidNetwork(format!("coupling diagonal entry {} is non-zero", i + 1)));
            }
            for j in (i + 1)..n {
                if couplings[i * n + j] != couplings[j * n + i] {
                    return Err(Error::InvalidNetwork(format!(
                        "couplings ({},{}) and ({},{}) differ",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(Self { energies, couplings, initial, sink, sink_rate })
    }

    pub fn n_sites(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings[i * self.n_sites() + j]
    }

    /// Row-major coupling matrix.
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn initial_node(&self) -> usize {
        self.initial
    }

    pub fn sink_node(&self) -> usize {
        self.sink
    }

    pub fn sink_rate(&self) -> f64 {
        self.sink_rate
    }

    pub fn with_sink_rate(mut self, sink_rate: f64) -> Result<Self> {
        if !(sink_rate >= 0.0) || !sink_rate.is_finite() {
            return Err(Error::InvalidNetwork(format!("sink rate must be finite and >= 0, got {sink_rate}")));
        }
        self.sink_rate = sink_rate;
        Ok(self)
    }

    /// Strictly upper triangular couplings in row-major order.
    pub fn upper_couplings(&self) -> Vec<f64> {
        let n = self.n_sites();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.coupling(i, j));
            }
        }
        out
    }

    /// Mean absolute value of the non-zero couplings; the natural rate unit
    /// of the network.
    pub fn coupling_scale(&self) -> f64 {
        let nz: Vec<f64> = self.upper_couplings().into_iter().filter(|g| *g != 0.0).map(f64::abs).collect();
        if nz.is_empty() {
            1.0
        } else {
            nz.iter().sum::<f64>() / nz.len() as f64
        }
    }

    fn with_upper_couplings(&self, upper: &[f64]) -> Self {
        let n = self.n_sites();
        let mut couplings = vec![0.0; n * n];
        let mut idx = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                couplings[i * n + j] = upper[idx];
                couplings[j * n + i] = upper[idx];
                idx += 1;
            }
        }
        Self { couplings, ..self.clone() }
    }

    pub fn to_file(&self) -> NetworkFile {
        NetworkFile {
            n_sites: self.n_sites(),
            energies: self.energies.clone(),
            couplings: self.couplings.clone(),
            initial_node: self.initial + 1,
            sink_node: self.sink + 1,
            sink_rate: self.sink_rate,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: NetworkFile = serde_json::from_str(&text)?;
        file.into_network()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_file())?)?;
        Ok(())
    }
}

/// On-disk network description with 1-based node labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub n_sites: usize,
    pub energies: Vec<f64>,
    /// Row-major `n_sites × n_sites`.
    pub couplings: Vec<f64>,
    pub initial_node: usize,
    pub sink_node: usize,
    pub sink_rate: f64,
}

impl NetworkFile {
    pub fn into_network(self) -> Result<ExcitationNetwork> {
        if self.energies.len() != self.n_sites {
            return Err(Error::InvalidNetwork(format!(
                "n_sites is {} but {} energies were given",
                self.n_sites,
                self.energies.len()
            )));
        }
        if self.initial_node == 0 || self.sink_node == 0 {
            return Err(Error::InvalidNetwork("node labels are 1-based".into()));
        }
        ExcitationNetwork::new(
            self.energies,
            self.couplings,
            self.initial_node - 1,
            self.sink_node - 1,
            self.sink_rate,
        )
    }
}

/// Fully connected graph with uniform hopping `g` and zero site energies.
pub fn fully_connected(n: usize, g: f64, initial: usize, sink: usize, sink_rate: f64) -> Result<ExcitationNetwork> {
    if n < 2 {
        return Err(Error::InvalidNetwork(format!("fully connected graph needs n >= 2, got {n}")));
    }
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::InvalidNetwork(format!("hopping must be positive, got {g}")));
    }
    let mut couplings = vec![g; n * n];
    for i in 0..n {
        couplings[i * n + i] = 0.0;
    }
    ExcitationNetwork::new(vec![0.0; n], couplings, initial, sink, sink_rate)
}

/// Open chain `1 - 2 - ... - n` with hopping `g`, excitation entering at
/// one end and the sink at the other.
pub fn path_network(n: usize, g: f64, sink_rate: f64) -> Result<ExcitationNetwork> {
    if n < 2 {
        return Err(Error::InvalidNetwork(format!("path needs n >= 2, got {n}")));
    }
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::InvalidNetwork(format!("hopping must be positive, got {g}")));
    }
    let mut couplings = vec![0.0; n * n];
    for i in 0..n - 1 {
        couplings[i * n + i + 1] = g;
        couplings[(i + 1) * n + i] = g;
    }
    ExcitationNetwork::new(vec![0.0; n], couplings, 0, n - 1, sink_rate)
}

/// Eight-site FMO complex, excitation entering at site 1, sink at site 3.
pub fn fmo_network(sink_rate: f64) -> Result<ExcitationNetwork> {
    fmo_truncated(8, sink_rate)
}

/// Seven-site FMO variant: site 8 removed.
pub fn fmo7_network(sink_rate: f64) -> Result<ExcitationNetwork> {
    fmo_truncated(7, sink_rate)
}

fn fmo_truncated(n: usize, sink_rate: f64) -> Result<ExcitationNetwork> {
    let energies = (0..n).map(|i| FMO_HAMILTONIAN[i][i]).collect();
    let mut couplings = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                couplings[i * n + j] = FMO_HAMILTONIAN[i][j];
            }
        }
    }
    ExcitationNetwork::new(energies, couplings, 0, 2, sink_rate)
}

/// `H_ij = g_ij` off the diagonal, `H_ii = ω_i - iγ[i = s]`.
pub fn single_excitation_hamiltonian(net: &ExcitationNetwork) -> ComplexMatrix {
    let n = net.n_sites();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let sink = if i == net.sink_node() { net.sink_rate() } else { 0.0 };
            C64::new(net.energies()[i], -sink)
        } else {
            C64::new(net.coupling(i, j), 0.0)
        }
    })
}

/// Randomly permutes the links of the network: the upper-triangular coupling
/// values are shuffled uniformly and mirrored. Energies, endpoints and sink
/// rate are kept.
pub fn reshuffle_couplings<R: Rng + ?Sized>(net: &ExcitationNetwork, rng: &mut R) -> ExcitationNetwork {
    let mut upper = net.upper_couplings();
    upper.shuffle(rng);
    net.with_upper_couplings(&upper)
}

/// Applies an explicit permutation of the upper-triangular coupling slots:
/// slot `k` receives the value formerly at `perm[k]`.
pub fn permute_couplings(net: &ExcitationNetwork, perm: &[usize]) -> Result<ExcitationNetwork> {
    let upper = net.upper_couplings();
    if perm.len() != upper.len() {
        return Err(Error::InvalidNetwork(format!(
            "permutation of length {} for {} links",
            perm.len(),
            upper.len()
        )));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidNetwork("not a permutation".into()));
        }
    }
    let permuted: Vec<f64> = perm.iter().map(|&p| upper[p]).collect();
    Ok(net.with_upper_couplings(&permuted))
}
