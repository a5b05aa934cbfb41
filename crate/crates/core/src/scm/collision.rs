use crate::noise::collision_strength;
use crate::propagation::DensityMatrix;

/// Traced-out ancilla collision on node `node`: every coherence between
/// `node` and another site is multiplied by `cos θ`, everything else is kept.
pub fn apply_collision(rho: &DensityMatrix, node: usize, theta: f64) -> DensityMatrix {
    let n = rho.dim();
    assert!(node < n, "node {node} out of range for dimension {n}");
    let keep = 1.0 - collision_strength(theta);
    let mut m = rho.matrix().clone();
    for j in 0..n {
        if j != node {
            m[(node, j)] *= keep;
            m[(j, node)] *= keep;
        }
    }
    DensityMatrix::from_matrix_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{full_space_collision, random_state};
    use crate::linalg::{hermiticity_defect, max_abs_diff};
    use crate::rng::{stream, Purpose};
    use rand::Rng;
    use std::f64::consts::PI;

    #[test]
    fn full_turn_is_identity() {
        let mut rng = stream(1, Purpose::Oracle, 1, 0);
        let rho = random_state(4, &mut rng);
        assert_eq!(apply_collision(&rho, 2, 2.0 * PI), rho);
    }

    #[test]
    fn quarter_turn_kills_coherences() {
        let mut rng = stream(1, Purpose::Oracle, 2, 0);
        let rho = random_state(4, &mut rng);
        let out = apply_collision(&rho, 1, PI / 2.0);
        for j in 0..4 {
            if j != 1 {
                assert!(out.matrix()[(1, j)].norm() < 1e-16);
                assert!(out.matrix()[(j, 1)].norm() < 1e-16);
            }
            assert_eq!(out.matrix()[(j, j)], rho.matrix()[(j, j)]);
        }
        assert_eq!(out.matrix()[(0, 2)], rho.matrix()[(0, 2)]);
    }

    #[test]
    fn matches_full_space_oracle() {
        let mut rng = stream(1, Purpose::Oracle, 3, 0);
        for n in [2usize, 3, 4] {
            for _ in 0..10 {
                let rho = random_state(n, &mut rng);
                let node = rng.random_range(0..n);
                let theta = rng.random_range(0.0..2.0 * PI);
                let fast = apply_collision(&rho, node, theta);
                let slow = full_space_collision(&rho, node, theta);
                assert!(max_abs_diff(fast.matrix(), &slow) < 1e-12);
            }
        }
    }

    #[test]
    fn channel_is_trace_preserving_and_positive() {
        let mut rng = stream(1, Purpose::Oracle, 4, 0);
        for _ in 0..20 {
            let rho = random_state(5, &mut rng);
            let theta = rng.random_range(-7.0..7.0);
            let out = apply_collision(&rho, rng.random_range(0..5), theta);
            assert!((out.trace() - rho.trace()).abs() < 1e-15);
            assert!(hermiticity_defect(out.matrix()) < 1e-15);
            assert!(out.min_eigenvalue() > -1e-12);
        }
    }

    #[test]
    fn supplementary_angles_agree() {
        let mut rng = stream(1, Purpose::Oracle, 5, 0);
        let rho = random_state(4, &mut rng);
        for theta in [0.4, 1.3, 2.2, 3.0] {
            let a = apply_collision(&rho, 3, theta);
            let b = apply_collision(&rho, 3, 2.0 * PI - theta);
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-15);
        }
    }
}
