use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of recorded time points.
pub const DEFAULT_POINTS: usize = 2000;

/// Uniform time grid `t_j = j · t_max / (n_points - 1)` on `[0, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_max: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_points: usize) -> Result<Self> {
        if !(t_max > 0.0) || !t_max.is_finite() {
            return Err(Error::InvalidConfig(format!("t_max must be positive, got {t_max}")));
        }
        if n_points < 2 {
            return Err(Error::InvalidConfig(format!("time grid needs at least 2 points, got {n_points}")));
        }
        Ok(Self { t_max, n_points })
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.t_max / (self.n_points - 1) as f64
    }

    pub fn time(&self, j: usize) -> f64 {
        if j + 1 == self.n_points {
            self.t_max
        } else {
            j as f64 * self.step()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|j| self.time(j))
    }
}
