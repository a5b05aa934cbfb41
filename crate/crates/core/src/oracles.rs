//! Slow reference computations used to cross-check the fast paths.
//!
//! Nothing here is used by the simulation engine itself.

use rand::Rng;

use crate::linalg::{ComplexMatrix, C64};
use crate::propagation::DensityMatrix;

/// Brute-force collision on the full `2^N`-dimensional register with an
/// explicit ancilla.
///
/// The single-excitation state is embedded into the register, the ancilla
/// starts in `|0⟩`, the joint unitary `exp(-i θ/2 σ_x^anc ⊗ σ_z^node)` is
/// applied and the ancilla is traced out. Returns the single-excitation block.
pub fn full_space_collision(rho: &DensityMatrix, node: usize, theta: f64) -> ComplexMatrix {
    let n = rho.dim();
    assert!(n <= 8, "full-space oracle limited to 8 qubits");
    let dim_sys = 1usize << n;
    let dim = dim_sys * 2;
    // the ancilla is the most significant bit
    let mut full = ComplexMatrix::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            full[(1 << i, 1 << j)] = rho.matrix()[(i, j)];
        }
    }
    let z = |b: usize| if (b >> node) & 1 == 1 { -1.0 } else { 1.0 };
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mut u = ComplexMatrix::zeros(dim, dim);
    for b in 0..dim {
        u[(b, b)] += C64::new(c, 0.0);
        u[(b ^ dim_sys, b)] += C64::new(0.0, -s * z(b & (dim_sys - 1)));
    }
    let out = &u * full * u.adjoint();
    let mut reduced = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            for anc in [0, dim_sys] {
                reduced[(i, j)] += out[((1 << i) | anc, (1 << j) | anc)];
            }
        }
    }
    reduced
}

/// Random normalized state `A A† / Tr(A A†)`.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let m = &a * a.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    DensityMatrix::new(m / C64::new(tr, 0.0)).expect("A A† is a valid state")
}

/// `exp(M)` from a 200-term Taylor series of `M / 2^s` followed by `s`
/// squarings, with `s` chosen so that the scaled norm is below one half.
pub fn taylor_exponential(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.nrows();
    let norm: f64 = m.iter().map(|z| z.norm()).sum::<f64>();
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) > 0.5 {
        s += 1;
    }
    let scaled = m / C64::new(2f64.powi(s as i32), 0.0);
    let mut term = ComplexMatrix::identity(n, n);
    let mut sum = ComplexMatrix::identity(n, n);
    for k in 1..=200 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix_exponential, max_abs_diff};
    use crate::rng::{stream, Purpose};

    #[test]
    fn pade_matches_taylor_on_random_matrices() {
        let mut rng = stream(17, Purpose::Oracle, 0, 0);
        for _ in 0..20 {
            let m = ComplexMatrix::from_fn(6, 6, |_, _| C64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)));
            let a = matrix_exponential(&m).unwrap();
            let b = taylor_exponential(&m);
            let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
            assert!(max_abs_diff(&a, &b) < 1e-10 * scale, "{}", max_abs_diff(&a, &b));
        }
    }
}
