//! Transport figures of merit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 0.95;

/// Decreases beyond this are treated as a broken sink series.
pub const MONOTONICITY_TOL: f64 = 1e-9;

/// Performance `ε = 1/t*`, where `t*` is the time at which the sink
/// population first reaches the threshold. `ε = 0` if it never does.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceResult {
    pub epsilon: f64,
    pub reached: bool,
    pub crossing_time: Option<f64>,
}

impl PerformanceResult {
    pub fn unreached() -> Self {
        Self { epsilon: 0.0, reached: false, crossing_time: None }
    }

    pub fn from_crossing(t: Option<f64>) -> Self {
        match t {
            Some(t) => Self { epsilon: 1.0 / t, reached: true, crossing_time: Some(t) },
            None => Self::unreached(),
        }
    }
}

/// Linear interpolation of the threshold crossing between two samples with
/// `p0 < threshold <= p1`.
pub fn interpolate_crossing(t0: f64, p0: f64, t1: f64, p1: f64, threshold: f64) -> f64 {
    if p1 == threshold {
        t1
    } else {
        t0 + (threshold - p0) / (p1 - p0) * (t1 - t0)
    }
}

pub fn performance(times: &[f64], sink: &[f64], threshold: f64) -> Result<PerformanceResult> {
    if times.len() != sink.len() {
        return Err(Error::InvalidSeries(format!("{} times but {} values", times.len(), sink.len())));
    }
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidSeries(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    for (j, w) in sink.windows(2).enumerate() {
        if w[1] < w[0] - MONOTONICITY_TOL {
            return Err(Error::InvalidSeries(format!(
                "sink population decreases from {} to {} at t = {}",
                w[0],
                w[1],
                times[j + 1]
            )));
        }
    }
    let Some(j) = sink.iter().position(|&p| p >= threshold) else {
        return Ok(PerformanceResult::unreached());
    };
    let t = if j == 0 {
        times[0]
    } else {
        interpolate_crossing(times[j - 1], sink[j - 1], times[j], sink[j], threshold)
    };
    Ok(PerformanceResult::from_crossing(Some(t)))
}

/// Collision rates `gN/(2πm)`, `m = 1..=m_max`, whose mean interval matches
/// the `m`-th revival of the noiseless fully connected graph.
pub fn predicted_drop_rates(n: usize, g: f64, m_max: usize) -> Vec<f64> {
    let base = g * n as f64 / std::f64::consts::TAU;
    (1..=m_max).map(|m| base / m as f64).collect()
}
