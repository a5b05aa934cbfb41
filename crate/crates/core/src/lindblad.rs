//! Markovian reference: for exponential collision intervals the ensemble
//! average obeys `dρ/dt = -i(H ρ - ρ H†) + Σ_i ζ_i (Φ_i[ρ] - ρ)`.

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::linalg::{ComplexMatrix, C64};
use crate::network::{single_excitation_hamiltonian, ExcitationNetwork};
use crate::noise::{collision_strength, NoiseProfile};
use crate::propagation::DensityMatrix;

/// Successive step refinements must agree this closely (max norm).
pub const REFINEMENT_TOL: f64 = 1e-8;
pub const MAX_HALVINGS: usize = 20;

/// Dissipator rates of a profile: `ζ_i`, which equals `1/λ_i` for unit shape.
pub fn markovian_rates(profile: &NoiseProfile) -> Vec<f64> {
    profile.rates.clone()
}

fn rhs_into(h: &ComplexMatrix, rates: &[f64], strength: f64, rho: &ComplexMatrix, prod: &mut ComplexMatrix, out: &mut ComplexMatrix) {
    let n = h.nrows();
    // ρ is Hermitian, so ρH† = (Hρ)†
    h.mul_to(rho, prod);
    for j in 0..n {
        for i in 0..n {
            let d = prod[(i, j)] - prod[(j, i)].conj();
            out[(i, j)] = C64::new(d.im, -d.re);
        }
    }
    if strength == 0.0 {
        return;
    }
    // Φ_i[ρ] - ρ removes `strength` of every coherence touching node i
    for (i, &r) in rates.iter().enumerate() {
        if r == 0.0 {
            continue;
        }
        let c = r * strength;
        for j in 0..n {
            if j != i {
                out[(i, j)] -= rho[(i, j)] * c;
                out[(j, i)] -= rho[(j, i)] * c;
            }
        }
    }
}

fn rhs(h: &ComplexMatrix, rates: &[f64], strength: f64, rho: &ComplexMatrix) -> ComplexMatrix {
    let n = h.nrows();
    let mut prod = ComplexMatrix::zeros(n, n);
    let mut out = ComplexMatrix::zeros(n, n);
    rhs_into(h, rates, strength, rho, &mut prod, &mut out);
    out
}

/// Right-hand side of the master equation.
pub fn lindblad_rhs(rho: &DensityMatrix, net: &ExcitationNetwork, rates: &[f64], theta: f64) -> Result<ComplexMatrix> {
    check_rates(net, rates)?;
    let h = single_excitation_hamiltonian(net);
    Ok(rhs(&h, rates, collision_strength(theta), rho.matrix()))
}

fn check_rates(net: &ExcitationNetwork, rates: &[f64]) -> Result<()> {
    if rates.len() != net.n_sites() {
        return Err(Error::InvalidNoise(format!("{} rates for {} nodes", rates.len(), net.n_sites())));
    }
    if rates.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(Error::InvalidNoise("rates must be finite and >= 0".into()));
    }
    Ok(())
}

fn axpy(y: &mut ComplexMatrix, a: f64, x: &ComplexMatrix) {
    for (y, x) in y.iter_mut().zip(x.iter()) {
        *y += x * a;
    }
}

fn rk4_series(
    h: &ComplexMatrix,
    rates: &[f64],
    strength: f64,
    rho0: &ComplexMatrix,
    grid: &TimeGrid,
    substeps: usize,
) -> (Vec<f64>, ComplexMatrix) {
    let n = h.nrows();
    let dt = grid.step() / substeps as f64;
    let mut rho = rho0.clone();
    let mut prod = ComplexMatrix::zeros(n, n);
    let mut stage = ComplexMatrix::zeros(n, n);
    let mut k = ComplexMatrix::zeros(n, n);
    let mut acc = ComplexMatrix::zeros(n, n);
    let trace = |m: &ComplexMatrix| 1.0 - m.diagonal().iter().map(|z| z.re).sum::<f64>();
    let mut sink = vec![trace(&rho)];
    for _ in 1..grid.len() {
        for _ in 0..substeps {
            rhs_into(h, rates, strength, &rho, &mut prod, &mut k);
            acc.copy_from(&k);
            for (w, next) in [(0.5, 2.0), (0.5, 2.0), (1.0, 1.0)] {
                stage.copy_from(&rho);
                axpy(&mut stage, w * dt, &k);
                rhs_into(h, rates, strength, &stage, &mut prod, &mut k);
                axpy(&mut acc, next, &k);
            }
            axpy(&mut rho, dt / 6.0, &acc);
            for j in 0..n {
                rho[(j, j)].im = 0.0;
                for i in 0..j {
                    rho[(j, i)] = rho[(i, j)].conj();
                }
            }
        }
        sink.push(trace(&rho));
    }
    (sink, rho)
}

/// Result of an accepted master-equation integration.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladSolution {
    pub times: Vec<f64>,
    pub sink: Vec<f64>,
    pub final_state: DensityMatrix,
    /// RK4 steps per grid interval at acceptance.
    pub substeps: usize,
}

/// Classical RK4 from `|r⟩⟨r|`, halving the step until two successive
/// refinements of the sink series agree to [`REFINEMENT_TOL`].
pub fn integrate_lindblad(net: &ExcitationNetwork, rates: &[f64], theta: f64, grid: &TimeGrid) -> Result<LindbladSolution> {
    check_rates(net, rates)?;
    let h = single_excitation_hamiltonian(net);
    let strength = collision_strength(theta);
    let rho0 = DensityMatrix::localized(net.n_sites(), net.initial_node()).into_matrix();

    // start from a step that keeps RK4 inside its stability region
    let spectral_bound = h.iter().map(|z| z.norm()).fold(0.0, f64::max) * net.n_sites() as f64
        + rates.iter().sum::<f64>() * strength;
    let mut substeps = ((grid.step() * spectral_bound / 0.5).ceil() as usize).max(1);
    let (mut coarse, _) = rk4_series(&h, rates, strength, &rho0, grid, substeps);
    for _ in 0..MAX_HALVINGS {
        substeps *= 2;
        let (fine, rho) = rk4_series(&h, rates, strength, &rho0, grid, substeps);
        let diff = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if !diff.is_finite() {
            return Err(Error::Integration("non-finite state".into()));
        }
        if diff < REFINEMENT_TOL {
            return Ok(LindbladSolution {
                times: grid.times().collect(),
                sink: fine,
                final_state: DensityMatrix::from_matrix_unchecked(rho),
                substeps,
            });
        }
        coarse = fine;
    }
    Err(Error::Integration(format!("no convergence after {MAX_HALVINGS} step halvings")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_defect, max_abs_diff};
    use crate::metrics::performance;
    use crate::network::{fmo_network, fully_connected};
    use crate::oracles::random_state;
    use crate::propagation::evolve;
    use crate::rng::{stream, Purpose};
    use std::f64::consts::PI;

    #[test]
    fn noiseless_rhs_is_commutator() {
        let net = fmo_network(0.0).unwrap();
        let mut rng = stream(3, Purpose::Oracle, 0, 0);
        let rho = random_state(8, &mut rng);
        let h = single_excitation_hamiltonian(&net);
        let expected = (&h * rho.matrix() - rho.matrix() * &h) * C64::new(0.0, -1.0);
        let got = lindblad_rhs(&rho, &net, &[0.0; 8], PI / 2.0).unwrap();
        assert!(max_abs_diff(&got, &expected) < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_stationary() {
        let net = fully_connected(5, 1.0, 0, 4, 0.0).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::identity(5, 5) / C64::new(5.0, 0.0)).unwrap();
        let got = lindblad_rhs(&rho, &net, &[1.0, 2.0, 0.0, 3.0, 0.5], 0.8).unwrap();
        assert!(got.iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn populations_fixed_without_hopping() {
        let net = ExcitationNetwork::new(vec![0.0; 3], vec![0.0; 9], 0, 2, 0.0).unwrap();
        let mut m = ComplexMatrix::zeros(3, 3);
        m[(0, 0)] = C64::new(0.2, 0.0);
        m[(1, 1)] = C64::new(0.5, 0.0);
        m[(2, 2)] = C64::new(0.3, 0.0);
        let got = lindblad_rhs(&DensityMatrix::new(m).unwrap(), &net, &[4.0; 3], PI / 2.0).unwrap();
        assert!(got.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn zero_rates_reproduce_free_evolution() {
        let net = fully_connected(6, 1.0, 0, 5, 0.8).unwrap();
        let grid = TimeGrid::new(5.0, 51).unwrap();
        let sol = integrate_lindblad(&net, &[0.0; 6], PI / 2.0, &grid).unwrap();
        let h = single_excitation_hamiltonian(&net);
        let rho0 = DensityMatrix::localized(6, 0);
        for (j, t) in grid.times().enumerate() {
            let exact = evolve(&rho0, &h, t).unwrap().sink_population();
            assert!((sol.sink[j] - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn trace_and_hermiticity_invariants() {
        let net = fully_connected(5, 1.0, 0, 4, 0.0).unwrap();
        let grid = TimeGrid::new(6.0, 61).unwrap();
        let sol = integrate_lindblad(&net, &[1.0, 0.3, 0.0, 2.0, 0.1], 1.0, &grid).unwrap();
        assert!(sol.sink.iter().all(|s| s.abs() < 1e-10));
        assert!(hermiticity_defect(sol.final_state.matrix()) < 1e-10);

        let net = fully_connected(5, 1.0, 0, 4, 1.0).unwrap();
        let sol = integrate_lindblad(&net, &[1.0; 5], 1.0, &grid).unwrap();
        for w in sol.sink.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn halving_the_accepted_step_changes_little() {
        let net = fully_connected(5, 1.0, 0, 4, 1.0).unwrap();
        let grid = TimeGrid::new(8.0, 41).unwrap();
        let rates = [0.0, 2.0, 2.0, 2.0, 2.0];
        let sol = integrate_lindblad(&net, &rates, PI / 2.0, &grid).unwrap();
        let h = single_excitation_hamiltonian(&net);
        let rho0 = DensityMatrix::localized(5, 0).into_matrix();
        let (finer, _) = rk4_series(&h, &rates, 1.0, &rho0, &grid, sol.substeps * 2);
        let diff = sol.sink.iter().zip(&finer).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff <= 1e-8, "{diff}");
    }

    #[test]
    fn very_strong_dephasing_slows_transfer() {
        let net = fully_connected(3, 1.0, 0, 2, 1.0).unwrap();
        let grid = TimeGrid::new(400.0, 801).unwrap();
        let eps = |rate: f64| {
            let sol = integrate_lindblad(&net, &[rate, 0.0, 0.0], PI / 2.0, &grid).unwrap();
            performance(&sol.times, &sol.sink, 0.95).unwrap().epsilon
        };
        let moderate = eps(1.0);
        let zeno = eps(200.0);
        assert!(moderate > 0.0);
        assert!(zeno < 0.2 * moderate, "moderate {moderate} zeno {zeno}");
    }

    #[test]
    fn rate_length_must_match() {
        let net = fully_connected(4, 1.0, 0, 3, 1.0).unwrap();
        let grid = TimeGrid::new(1.0, 3).unwrap();
        assert!(integrate_lindblad(&net, &[1.0; 3], 1.0, &grid).is_err());
        assert!(integrate_lindblad(&net, &[1.0, 1.0, -1.0, 1.0], 1.0, &grid).is_err());
    }
}
