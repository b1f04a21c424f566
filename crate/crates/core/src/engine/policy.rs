//! Agent policies: state-dependent strategies over one mechanism each.

use std::fmt;

use super::mechanism::MechanismId;
use super::noise::NoiseRng;
use super::state::{AddressId, GlobalState, StateVar, VarKey};

/// Which part of the global state a policy is allowed to see (`Y ⊆ X`).
#[derive(Debug, Clone, PartialEq)]
pub enum ObservationFilter {
    All,
    Keys(Vec<VarKey>),
    Names(Vec<&'static str>),
    Owners(Vec<AddressId>),
}

impl ObservationFilter {
    pub fn admits(&self, var: &StateVar) -> bool {
        match self {
            ObservationFilter::All => true,
            ObservationFilter::Keys(keys) => keys.contains(&var.key()),
            ObservationFilter::Names(names) => names.contains(&var.name),
            ObservationFilter::Owners(owners) => owners.contains(&var.owner),
        }
    }
}

/// The observable subspace handed to a strategy.
pub struct Observation<'a> {
    state: &'a GlobalState,
    filter: &'a ObservationFilter,
}

impl<'a> Observation<'a> {
    pub fn new(state: &'a GlobalState, filter: &'a ObservationFilter) -> Self {
        Self { state, filter }
    }

    pub fn get(&self, key: VarKey) -> Option<&'a StateVar> {
        self.state.get(key).filter(|v| self.filter.admits(v))
    }

    /// Value of an observable variable; hidden and undeclared ones read as `None`.
    pub fn value(&self, key: VarKey) -> Option<f64> {
        self.get(key).map(|v| v.value)
    }

    pub fn vars(&self) -> impl Iterator<Item = &'a StateVar> + '_ {
        self.state.iter().filter(|v| self.filter.admits(v))
    }
}

/// `P: Y → U ∪ {∅}`. Implementors carry their own private parameters.
pub trait Strategy<A>: Send + Sync {
    fn decide(&self, view: &Observation<'_>, step: u64, rng: &mut NoiseRng) -> Option<A>;
}

impl<A, F> Strategy<A> for F
where
    F: Fn(&Observation<'_>, u64, &mut NoiseRng) -> Option<A> + Send + Sync,
{
    fn decide(&self, view: &Observation<'_>, step: u64, rng: &mut NoiseRng) -> Option<A> {
        self(view, step, rng)
    }
}

pub struct Policy<A> {
    pub agent: AddressId,
    pub mechanism: MechanismId,
    monitoring_interval: u64,
    pub observation: ObservationFilter,
    pub strategy: Box<dyn Strategy<A>>,
}

impl<A> Policy<A> {
    /// A policy that sees the full state and is evaluated every step.
    pub fn new(agent: AddressId, mechanism: MechanismId, strategy: impl Strategy<A> + 'static) -> Self {
        Self {
            agent,
            mechanism,
            monitoring_interval: 1,
            observation: ObservationFilter::All,
            strategy: Box::new(strategy),
        }
    }

    /// Evaluate only on steps divisible by `interval`.
    ///
    /// # Panics
    /// If `interval` is zero.
    pub fn every(mut self, interval: u64) -> Self {
        assert!(interval >= 1, "monitoring interval must be at least one step");
        self.monitoring_interval = interval;
        self
    }

    pub fn observing(mut self, filter: ObservationFilter) -> Self {
        self.observation = filter;
        self
    }

    pub fn monitoring_interval(&self) -> u64 {
        self.monitoring_interval
    }

    pub fn is_due(&self, step: u64) -> bool {
        step.is_multiple_of(self.monitoring_interval)
    }
}

impl<A> fmt::Debug for Policy<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Policy")
            .field("agent", &self.agent)
            .field("mechanism", &self.mechanism)
            .field("monitoring_interval", &self.monitoring_interval)
            .field("observation", &self.observation)
            .finish_non_exhaustive()
    }
}
