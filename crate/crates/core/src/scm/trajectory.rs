use super::schedule::{CollisionEvent, CollisionSchedule, EventStream};
use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::network::{single_excitation_hamiltonian, ExcitationNetwork};
use crate::noise::NoiseProfile;
use crate::propagation::{DensityMatrix, FrameState, Propagator, Scratch};

/// A network together with a noise profile and its precomputed propagator.
#[derive(Debug, Clone)]
pub struct Simulator {
    net: ExcitationNetwork,
    profile: NoiseProfile,
    propagator: Propagator,
    strength: f64,
}

/// Sink population of one realization on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub sink: Vec<f64>,
    pub states: Option<Vec<DensityMatrix>>,
    pub collisions: u64,
}

/// One realization advanced incrementally: free evolution between events,
/// the collision channel at each event.
#[derive(Debug, Clone)]
pub struct Walker<E = EventStream> {
    state: FrameState,
    time: f64,
    events: E,
    pending: Option<CollisionEvent>,
    collisions: u64,
}

impl<E: Iterator<Item = CollisionEvent>> Walker<E> {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn collisions(&self) -> u64 {
        self.collisions
    }

    pub fn advance_to(&mut self, sim: &Simulator, t: f64, scratch: &mut Scratch) -> Result<()> {
        let prop = &sim.propagator;
        while let Some(e) = self.pending {
            if e.time > t {
                break;
            }
            prop.evolve(&mut self.state, e.time - self.time, scratch)?;
            self.time = e.time;
            prop.dephase(&mut self.state, e.node, sim.strength, scratch);
            self.collisions += 1;
            self.pending = self.events.next();
        }
        if t > self.time {
            prop.evolve(&mut self.state, t - self.time, scratch)?;
            self.time = t;
        }
        Ok(())
    }

    /// `1 - Tr ρ`, clamped to `[0, 1]`.
    pub fn sink_population(&self, sim: &Simulator) -> f64 {
        (1.0 - sim.propagator.trace(&self.state)).clamp(0.0, 1.0)
    }

    pub fn density_matrix(&self, sim: &Simulator) -> DensityMatrix {
        sim.propagator.leave(&self.state)
    }
}

impl Simulator {
    pub fn new(net: &ExcitationNetwork, profile: &NoiseProfile) -> Result<Self> {
        let propagator = Propagator::new(&single_excitation_hamiltonian(net))?;
        Self::with_propagator(net, profile, propagator)
    }

    /// Reuses a propagator built for `net`, e.g. across many noise profiles.
    pub fn with_propagator(net: &ExcitationNetwork, profile: &NoiseProfile, propagator: Propagator) -> Result<Self> {
        profile.validate()?;
        if profile.n_nodes() != net.n_sites() {
            return Err(Error::InvalidNoise(format!(
                "noise profile covers {} nodes, network has {}",
                profile.n_nodes(),
                net.n_sites()
            )));
        }
        if propagator.dim() != net.n_sites() {
            return Err(Error::Numeric("propagator dimension does not match the network".into()));
        }
        let strength = profile.dephasing_strength();
        Ok(Self { net: net.clone(), profile: profile.clone(), propagator, strength })
    }

    pub fn network(&self) -> &ExcitationNetwork {
        &self.net
    }

    pub fn profile(&self) -> &NoiseProfile {
        &self.profile
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    fn start<E: Iterator<Item = CollisionEvent>>(&self, mut events: E) -> Walker<E> {
        // collisions that act as the identity are dropped so the free
        // evolution is not split at all
        let pending = if self.strength == 0.0 { None } else { events.next() };
        Walker {
            state: self.propagator.localized(self.net.initial_node()),
            time: 0.0,
            events,
            pending,
            collisions: 0,
        }
    }

    /// Walker for trajectory `index` of an ensemble seeded with `seed`.
    pub fn walker(&self, t_max: f64, seed: u64, index: u64) -> Walker {
        self.start(EventStream::keyed(&self.profile, t_max, seed, index))
    }

    pub fn trajectory(&self, grid: &TimeGrid, seed: u64, index: u64, record_states: bool) -> Result<Trajectory> {
        let walker = self.walker(grid.t_max(), seed, index);
        self.run(walker, grid, record_states)
    }

    /// Realization driven by an explicit schedule.
    pub fn trajectory_with_schedule(
        &self,
        grid: &TimeGrid,
        schedule: &CollisionSchedule,
        record_states: bool,
    ) -> Result<Trajectory> {
        let walker = self.start(schedule.events().to_vec().into_iter());
        self.run(walker, grid, record_states)
    }

    fn run<E: Iterator<Item = CollisionEvent>>(
        &self,
        mut walker: Walker<E>,
        grid: &TimeGrid,
        record_states: bool,
    ) -> Result<Trajectory> {
        let mut scratch = Scratch::default();
        let mut sink = Vec::with_capacity(grid.len());
        let mut states = record_states.then(|| Vec::with_capacity(grid.len()));
        for t in grid.times() {
            walker.advance_to(self, t, &mut scratch)?;
            sink.push(walker.sink_population(self));
            if let Some(s) = states.as_mut() {
                s.push(walker.density_matrix(self));
            }
        }
        Ok(Trajectory { times: grid.times().collect(), sink, states, collisions: walker.collisions })
    }
}

/// Single realization starting from `|r⟩⟨r|`; trajectory `index` of the
/// ensemble seeded with `seed`.
pub fn simulate_trajectory(
    net: &ExcitationNetwork,
    profile: &NoiseProfile,
    grid: &TimeGrid,
    seed: u64,
    index: u64,
) -> Result<Trajectory> {
    Simulator::new(net, profile)?.trajectory(grid, seed, index, false)
}
