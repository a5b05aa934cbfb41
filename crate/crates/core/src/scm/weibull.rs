use rand::Rng;

/// Inverse of the Weibull CDF `1 - exp(-(t/λ)^k)`.
pub fn weibull_inverse_cdf(u: f64, shape: f64, scale: f64) -> f64 {
    scale * (-(-u).ln_1p()).powf(1.0 / shape)
}

/// One Weibull(k, λ) collision interval by inversion of a uniform draw on `[0, 1)`.
pub fn sample_weibull_interval<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    weibull_inverse_cdf(u, shape, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{weibull_mean, weibull_variance};
    use crate::rng::{stream, Purpose};

    #[test]
    fn inverse_cdf_special_cases() {
        let e = std::f64::consts::E;
        assert!((weibull_inverse_cdf(1.0 - 1.0 / e, 1.0, 2.0) - 2.0).abs() < 1e-14);
        assert!((weibull_inverse_cdf(1.0 - (-4.0f64).exp(), 2.0, 1.0) - 2.0).abs() < 1e-14);
        assert_eq!(weibull_inverse_cdf(0.0, 3.0, 1.0), 0.0);
    }

    #[test]
    fn bursty_sampler_mean() {
        // k = 0.5, λ = 1: mean Γ(3) = 2
        let mut rng = stream(5, Purpose::Oracle, 0, 0);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_weibull_interval(0.5, 1.0, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((weibull_mean(0.5, 1.0) - 2.0).abs() < 1e-12);
        assert!((weibull_variance(0.5, 1.0) - 20.0).abs() < 1e-10);
        let se = (var / n as f64).sqrt();
        assert!((mean - 2.0).abs() < 3.0 * se, "mean {mean} se {se}");
    }
}
