use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::weibull::sample_weibull_interval;
use crate::error::{Error, Result};
use crate::noise::NoiseProfile;
use crate::rng::collision_stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionEvent {
    pub time: f64,
    pub node: usize,
}

/// Chronological list of collisions on `[0, t_max]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CollisionSchedule {
    events: Vec<CollisionEvent>,
}

impl CollisionSchedule {
    pub fn new(events: Vec<CollisionEvent>) -> Result<Self> {
        for pair in events.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b.time < a.time || (b.time == a.time && b.node <= a.node) {
                return Err(Error::InvalidConfig(format!(
                    "schedule not chronological at t = {} (node {} then {})",
                    b.time,
                    a.node + 1,
                    b.node + 1
                )));
            }
        }
        if events.iter().any(|e| !(e.time >= 0.0) || !e.time.is_finite()) {
            return Err(Error::InvalidConfig("schedule times must be finite and >= 0".into()));
        }
        Ok(Self { events })
    }

    /// The schedule trajectory `trajectory` of an ensemble seeded with `seed` sees.
    pub fn keyed(profile: &NoiseProfile, t_max: f64, seed: u64, trajectory: u64) -> Self {
        Self { events: EventStream::keyed(profile, t_max, seed, trajectory).collect() }
    }

    pub fn events(&self) -> &[CollisionEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Collision times of one node.
    pub fn node_times(&self, node: usize) -> Vec<f64> {
        self.events.iter().filter(|e| e.node == node).map(|e| e.time).collect()
    }
}

/// Ordinary renewal process on each active node, all drawn from one stream
/// node after node, merged chronologically. Same-time events are ordered by
/// node index.
pub fn generate_schedule<R: Rng + ?Sized>(profile: &NoiseProfile, t_max: f64, rng: &mut R) -> CollisionSchedule {
    let mut events = Vec::new();
    for node in 0..profile.n_nodes() {
        let Some(scale) = profile.scale(node) else { continue };
        let shape = profile.shapes[node];
        let mut t = sample_weibull_interval(shape, scale, rng);
        while t <= t_max {
            events.push(CollisionEvent { time: t, node });
            t += sample_weibull_interval(shape, scale, rng);
        }
    }
    events.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.node.cmp(&b.node)));
    CollisionSchedule { events }
}

#[derive(Debug, Clone)]
struct Renewal {
    node: usize,
    shape: f64,
    scale: f64,
    next: f64,
    rng: ChaCha8Rng,
}

/// Lazily merged collision events, one keyed random stream per node.
#[derive(Debug, Clone)]
pub struct EventStream {
    nodes: Vec<Renewal>,
    t_max: f64,
}

impl EventStream {
    pub fn keyed(profile: &NoiseProfile, t_max: f64, seed: u64, trajectory: u64) -> Self {
        let nodes = (0..profile.n_nodes())
            .filter_map(|node| {
                let scale = profile.scale(node)?;
                let shape = profile.shapes[node];
                let mut rng = collision_stream(seed, trajectory, node as u64);
                let next = sample_weibull_interval(shape, scale, &mut rng);
                Some(Renewal { node, shape, scale, next, rng })
            })
            .collect();
        Self { nodes, t_max }
    }

    pub fn empty() -> Self {
        Self { nodes: Vec::new(), t_max: 0.0 }
    }
}

impl Iterator for EventStream {
    type Item = CollisionEvent;

    fn next(&mut self) -> Option<CollisionEvent> {
        let mut best: Option<usize> = None;
        for (i, r) in self.nodes.iter().enumerate() {
            if r.next <= self.t_max && best.is_none_or(|b| r.next < self.nodes[b].next) {
                best = Some(i);
            }
        }
        let r = &mut self.nodes[best?];
        let event = CollisionEvent { time: r.next, node: r.node };
        r.next += sample_weibull_interval(r.shape, r.scale, &mut r.rng);
        Some(event)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Purpose};

    #[test]
    fn inactive_profile_gives_empty_schedule() {
        let p = NoiseProfile::noiseless(5);
        let mut rng = stream(1, Purpose::Oracle, 0, 0);
        assert!(generate_schedule(&p, 10.0, &mut rng).is_empty());
        assert!(CollisionSchedule::keyed(&p, 10.0, 1, 0).is_empty());
    }

    #[test]
    fn poisson_event_counts() {
        // k = 1, ζ = 2 on [0, 50]: counts ~ Poisson(100)
        let p = NoiseProfile::new(vec![2.0], vec![1.0], 1.0).unwrap();
        let runs = 4000;
        let counts: Vec<f64> =
            (0..runs).map(|j| CollisionSchedule::keyed(&p, 50.0, 9, j).len() as f64).collect();
        let mean = counts.iter().sum::<f64>() / runs as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
        let mean_se = (100.0 / runs as f64).sqrt();
        let var_se = 100.0 * (2.0 / (runs - 1) as f64 + 1.0 / (100.0 * runs as f64)).sqrt();
        assert!((mean - 100.0).abs() < 3.0 * mean_se, "mean {mean}");
        assert!((var - 100.0).abs() < 3.0 * var_se, "var {var}");
    }

    #[test]
    fn merged_schedule_projects_onto_node_streams() {
        let p = NoiseProfile::new(vec![1.5, 0.0, 4.0], vec![0.7, 1.0, 3.0], 1.0).unwrap();
        let t_max = 20.0;
        let sched = CollisionSchedule::keyed(&p, t_max, 42, 3);
        assert!(CollisionSchedule::new(sched.events().to_vec()).is_ok());
        for node in [0usize, 2] {
            let mut rng = collision_stream(42, 3, node as u64);
            let scale = p.scale(node).unwrap();
            let mut expected = Vec::new();
            let mut t = sample_weibull_interval(p.shapes[node], scale, &mut rng);
            while t <= t_max {
                expected.push(t);
                t += sample_weibull_interval(p.shapes[node], scale, &mut rng);
            }
            assert_eq!(sched.node_times(node), expected);
        }
        assert!(sched.node_times(1).is_empty());
    }

    #[test]
    fn single_stream_schedule_is_sorted() {
        let p = NoiseProfile::homogeneous(4, 3.0, 0.5, 1.0).unwrap();
        let mut rng = stream(2, Purpose::Oracle, 0, 0);
        let s = generate_schedule(&p, 5.0, &mut rng);
        assert!(!s.is_empty());
        assert!(CollisionSchedule::new(s.events().to_vec()).is_ok());
        assert!(s.events().iter().all(|e| e.time <= 5.0));
    }

    #[test]
    fn unsorted_events_are_rejected() {
        let e = |time, node| CollisionEvent { time, node };
        assert!(CollisionSchedule::new(vec![e(1.0, 0), e(0.5, 1)]).is_err());
        assert!(CollisionSchedule::new(vec![e(1.0, 1), e(1.0, 0)]).is_err());
        assert!(CollisionSchedule::new(vec![e(1.0, 0), e(1.0, 1)]).is_ok());
    }
}
