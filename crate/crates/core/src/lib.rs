//! Noise-assisted excitation transport on quantum networks.
//!
//! Excitations hop on a network in the single-excitation subspace and leak
//! into a sink attached to one node. Dephasing is injected by ancillae that
//! collide with individual nodes at random times drawn from per-node Weibull
//! renewal processes. The crate provides the network models, an exact
//! propagator, the stochastic collision engine with ensemble averaging, a
//! Markovian master-equation reference, transport metrics, a genetic
//! optimizer over noise parameters, and the experiment drivers behind the
//! `scmnet` command line tool.

pub mod error;
pub mod experiments;
pub mod grid;
pub mod linalg;
pub mod lindblad;
pub mod metrics;
pub mod network;
pub mod noise;
pub mod optimizer;
pub mod oracles;
pub mod propagation;
pub mod rng;
pub mod scm;

pub use error::{Error, Result};
pub use grid::TimeGrid;
pub use linalg::{ComplexMatrix, C64};
pub use metrics::PerformanceResult;
pub use network::ExcitationNetwork;
pub use noise::NoiseProfile;
pub use propagation::DensityMatrix;
pub use scm::{CollisionSchedule, EnsembleDynamics};
