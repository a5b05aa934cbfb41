//! Stochastic collision engine: Weibull renewal schedules, the dephasing
//! collision channel, single realizations and ensemble averages.

mod collision;
mod ensemble;
mod schedule;
mod trajectory;
mod weibull;

pub use collision::apply_collision;
pub use ensemble::{
    simulate_ensemble, EnsembleDynamics, EnsemblePerformance, StopRule, TrajectoryPerformance,
};
pub use schedule::{generate_schedule, CollisionEvent, CollisionSchedule, EventStream};
pub use trajectory::{simulate_trajectory, Simulator, Trajectory, Walker};
pub use weibull::{sample_weibull_interval, weibull_inverse_cdf};
