use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::TimeGrid;
use crate::linalg::{matrix_exponential, max_abs_diff, ComplexMatrix, C64};
use crate::lindblad::integrate_lindblad;
use crate::network::{fully_connected, single_excitation_hamiltonian};
use crate::noise::NoiseProfile;
use crate::oracles::{full_space_collision, random_state, taylor_exponential};
use crate::propagation::{analytic_fc_population, evolve, DensityMatrix};
use crate::rng::{stream, Purpose};
use crate::scm::{apply_collision, Simulator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValidationSpec {
    pub sites: usize,
    pub zeta: f64,
    pub theta: f64,
    pub t_max: f64,
    pub n_points: usize,
    pub n_traj: usize,
    pub seed: u64,
}

impl Default for ValidationSpec {
    fn default() -> Self {
        Self { sites: 6, zeta: 2.0, theta: std::f64::consts::FRAC_PI_2, t_max: 30.0, n_points: 61, n_traj: 2000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCheck {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ValidationCheck {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value <= tolerance }
    }
}

/// Cross-checks the fast paths against slow references: the collision
/// channel against the explicit ancilla computation, the matrix exponential
/// against a Taylor series, free evolution against the closed form, and a
/// unit-shape ensemble against the master equation.
pub fn run_validation(spec: &ValidationSpec) -> Result<Vec<ValidationCheck>> {
    let mut rng = stream(spec.seed, Purpose::Oracle, 0, 0);
    let mut checks = Vec::new();

    let mut err = 0.0f64;
    for _ in 0..20 {
        let rho = random_state(3, &mut rng);
        let node = rng.random_range(0..3);
        let theta = rng.random_range(0.0..std::f64::consts::TAU);
        let fast = apply_collision(&rho, node, theta);
        err = err.max(max_abs_diff(fast.matrix(), &full_space_collision(&rho, node, theta)));
    }
    checks.push(ValidationCheck::at_most("collision_vs_ancilla", err, 1e-12));

    let mut err = 0.0f64;
    for _ in 0..20 {
        let m = ComplexMatrix::from_fn(6, 6, |_, _| C64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)));
        err = err.max(max_abs_diff(&matrix_exponential(&m)?, &taylor_exponential(&m)));
    }
    checks.push(ValidationCheck::at_most("expm_vs_taylor", err, 1e-10));

    let n = spec.sites;
    let free = fully_connected(n, 1.0, 0, n - 1, 0.0)?;
    let h = single_excitation_hamiltonian(&free);
    let rho0 = DensityMatrix::localized(n, 0);
    let mut err = 0.0f64;
    for j in 0..=100 {
        let t = j as f64 * 0.1;
        let p = evolve(&rho0, &h, t)?.populations();
        for (k, pk) in p.iter().enumerate() {
            err = err.max((pk - analytic_fc_population(n, 1.0, t, 0, k)).abs());
        }
    }
    checks.push(ValidationCheck::at_most("free_evolution_vs_closed_form", err, 1e-10));

    let net = fully_connected(n, 1.0, 0, n - 1, 1.0)?;
    let grid = TimeGrid::new(spec.t_max, spec.n_points)?;
    let reference = integrate_lindblad(&net, &vec![spec.zeta; n], spec.theta, &grid)?;
    let profile = NoiseProfile::homogeneous(n, spec.zeta, 1.0, spec.theta)?;
    let ens = Simulator::new(&net, &profile)?.ensemble(&grid, spec.n_traj, spec.seed)?;
    let mut max_abs = 0.0f64;
    let mut max_z = 0.0f64;
    for j in 0..grid.len() {
        let d = (ens.mean[j] - reference.sink[j]).abs();
        max_abs = max_abs.max(d);
        max_z = max_z.max(d / (ens.std_error[j] + 1e-8));
    }
    checks.push(ValidationCheck::at_most("ensemble_vs_master_equation_abs", max_abs, 0.02));
    checks.push(ValidationCheck::at_most("ensemble_vs_master_equation_sigma", max_z, 3.0));
    Ok(checks)
}
