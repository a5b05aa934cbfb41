use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-node Weibull renewal parameters plus the collision phase.
///
/// Rates are mean collision rates `ζ_i = 1/⟨t_i⟩`; the Weibull scale is
/// derived as `λ_i = 1/(ζ_i Γ(1 + 1/k_i))`. A zero rate switches a node off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseProfile {
    pub rates: Vec<f64>,
    pub shapes: Vec<f64>,
    /// Interaction strength in radians.
    pub theta: f64,
}

impl NoiseProfile {
    pub fn new(rates: Vec<f64>, shapes: Vec<f64>, theta: f64) -> Result<Self> {
        let p = Self { rates, shapes, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn noiseless(n: usize) -> Self {
        Self { rates: vec![0.0; n], shapes: vec![1.0; n], theta: 0.0 }
    }

    /// Same rate and shape on every node.
    pub fn homogeneous(n: usize, rate: f64, shape: f64, theta: f64) -> Result<Self> {
        Self::new(vec![rate; n], vec![shape; n], theta)
    }

    /// Collisions on `node` only.
    pub fn localized(n: usize, node: usize, rate: f64, shape: f64, theta: f64) -> Result<Self> {
        let mask: Vec<bool> = (0..n).map(|i| i == node).collect();
        Self::masked(&mask, rate, shape, theta)
    }

    /// Collisions on the nodes where `mask` is set.
    pub fn masked(mask: &[bool], rate: f64, shape: f64, theta: f64) -> Result<Self> {
        let rates = mask.iter().map(|&m| if m { rate } else { 0.0 }).collect();
        Self::new(rates, vec![shape; mask.len()], theta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rates.len() != self.shapes.len() {
            return Err(Error::InvalidNoise(format!(
                "{} rates but {} shapes",
                self.rates.len(),
                self.shapes.len()
            )));
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidNoise("interaction strength must be finite".into()));
        }
        for (i, (&z, &k)) in self.rates.iter().zip(&self.shapes).enumerate() {
            if !(z >= 0.0) || !z.is_finite() {
                return Err(Error::InvalidNoise(format!("node {}: rate must be finite and >= 0, got {z}", i + 1)));
            }
            if z > 0.0 && (!(k > 0.0) || !k.is_finite()) {
                return Err(Error::InvalidNoise(format!("node {}: shape must be positive, got {k}", i + 1)));
            }
        }
        Ok(())
    }

    pub fn n_nodes(&self) -> usize {
        self.rates.len()
    }

    pub fn is_active(&self, node: usize) -> bool {
        self.rates[node] > 0.0
    }

    /// Weibull scale `λ_i`, or `None` for an inactive node.
    pub fn scale(&self, node: usize) -> Option<f64> {
        self.is_active(node).then(|| weibull_scale_for_rate(self.rates[node], self.shapes[node]))
    }

    /// Amount by which a collision shrinks the coherences of the hit node:
    /// they are multiplied by `cos θ = 1 - strength`.
    pub fn dephasing_strength(&self) -> f64 {
        collision_strength(self.theta)
    }
}

/// Scale `λ` whose Weibull(k, λ) mean is `1/rate`.
pub fn weibull_scale_for_rate(rate: f64, shape: f64) -> f64 {
    1.0 / (rate * libm::tgamma(1.0 + 1.0 / shape))
}

/// Mean `λΓ(1 + 1/k)` of a Weibull distribution.
pub fn weibull_mean(shape: f64, scale: f64) -> f64 {
    scale * libm::tgamma(1.0 + 1.0 / shape)
}

/// Variance `λ²[Γ(1 + 2/k) − Γ(1 + 1/k)²]` of a Weibull distribution.
pub fn weibull_variance(shape: f64, scale: f64) -> f64 {
    let g1 = libm::tgamma(1.0 + 1.0 / shape);
    scale * scale * (libm::tgamma(1.0 + 2.0 / shape) - g1 * g1)
}

/// `1 - cos θ`, with `θ` folded into `[0, π]` so that `θ` and `2π - θ`
/// give the same value.
pub fn collision_strength(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut t = theta.rem_euclid(tau);
    if t > std::f64::consts::PI {
        t = tau - t;
    }
    1.0 - t.cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn scale_reproduces_mean_interval() {
        for k in [0.5, 1.0, 2.0, 10.0] {
            let lam = weibull_scale_for_rate(4.0, k);
            assert!((weibull_mean(k, lam) - 0.25).abs() < 1e-14);
        }
        assert!((weibull_scale_for_rate(3.0, 1.0) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn strength_values() {
        assert_eq!(collision_strength(2.0 * PI), 0.0);
        assert_eq!(collision_strength(0.0), 0.0);
        assert!((collision_strength(PI / 2.0) - 1.0).abs() < 1e-15);
        assert!((collision_strength(PI) - 2.0).abs() < 1e-15);
        for th in [0.3, 1.1, 2.9] {
            assert!((collision_strength(th) - collision_strength(2.0 * PI - th)).abs() < 1e-15);
        }
    }

    #[test]
    fn profile_validation() {
        assert!(NoiseProfile::new(vec![1.0], vec![0.0], 1.0).is_err());
        assert!(NoiseProfile::new(vec![0.0], vec![0.0], 1.0).is_ok());
        assert!(NoiseProfile::new(vec![-1.0], vec![1.0], 1.0).is_err());
        assert!(NoiseProfile::new(vec![1.0, 2.0], vec![1.0], 1.0).is_err());
        let p = NoiseProfile::localized(4, 2, 3.0, 10.0, 1.0).unwrap();
        assert_eq!(p.rates, vec![0.0, 0.0, 3.0, 0.0]);
        assert_eq!(p.scale(0), None);
        assert!(p.scale(2).is_some());
    }
}
