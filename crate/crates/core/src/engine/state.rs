//! Global state: a flat set of real-valued variables, each declared by exactly
//! one owner account and writable by exactly one controlling agent.

use std::collections::HashMap;
use std::fmt;

use super::EngineError;

/// Opaque account/agent identifier. Carries no key material.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AddressId(pub u32);

impl fmt::Display for AddressId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.0)
    }
}

/// Unit tag attached to every state variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    /// A token balance. Balances are non-negative and their sum is the supply.
    Xns,
    /// A running tally of tokens that moved. Not a balance, so it is excluded
    /// from supply totals.
    XnsFlow,
    Usd,
    Count,
    Rate,
}

/// `(owner, name)` address of a state variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarKey {
    pub owner: AddressId,
    pub name: &'static str,
}

impl VarKey {
    pub const fn new(owner: AddressId, name: &'static str) -> Self {
        Self { owner, name }
    }
}

impl fmt::Display for VarKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.owner, self.name)
    }
}

#[derive(Debug, Clone)]
pub struct StateVar {
    pub owner: AddressId,
    pub controller: AddressId,
    pub name: &'static str,
    pub value: f64,
    pub unit: Unit,
}

impl StateVar {
    pub fn new(owner: AddressId, controller: AddressId, name: &'static str, value: f64, unit: Unit) -> Self {
        Self { owner, controller, name, value, unit }
    }

    /// A variable the owner also controls.
    pub fn local(owner: AddressId, name: &'static str, value: f64, unit: Unit) -> Self {
        Self::new(owner, owner, name, value, unit)
    }

    pub fn key(&self) -> VarKey {
        VarKey::new(self.owner, self.name)
    }

    fn bit_eq(&self, other: &StateVar) -> bool {
        self.owner == other.owner
            && self.controller == other.controller
            && self.name == other.name
            && self.unit == other.unit
            && self.value.to_bits() == other.value.to_bits()
    }
}

/// The global state `X`, partitioned over owner accounts.
///
/// Variables keep their declaration order, so every iteration (and every
/// floating-point sum built from one) is deterministic.
#[derive(Debug, Clone, Default)]
pub struct GlobalState {
    vars: Vec<StateVar>,
    index: HashMap<VarKey, usize>,
}

impl GlobalState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a new variable. A second declaration of the same `(owner, name)`
    /// would break the partition and is rejected.
    pub fn declare(&mut self, var: StateVar) -> Result<(), EngineError> {
        let key = var.key();
        if self.index.contains_key(&key) {
            return Err(EngineError::PartitionViolation(key));
        }
        if var.unit == Unit::Xns && !(var.value >= 0.0) {
            return Err(EngineError::NegativeBalance { key, value: var.value });
        }
        self.index.insert(key, self.vars.len());
        self.vars.push(var);
        Ok(())
    }

    pub fn contains(&self, key: VarKey) -> bool {
        self.index.contains_key(&key)
    }

    pub fn get(&self, key: VarKey) -> Option<&StateVar> {
        self.index.get(&key).map(|&i| &self.vars[i])
    }

    pub fn value(&self, key: VarKey) -> Option<f64> {
        self.get(key).map(|v| v.value)
    }

    /// Value of a variable, treating an undeclared one as zero.
    pub fn value_or_zero(&self, key: VarKey) -> f64 {
        self.value(key).unwrap_or(0.0)
    }

    pub fn value_mut(&mut self, key: VarKey) -> Option<&mut f64> {
        match self.index.get(&key) {
            Some(&i) => Some(&mut self.vars[i].value),
            None => None,
        }
    }

    /// Sets an existing variable. Returns false if it was never declared.
    pub fn set(&mut self, key: VarKey, value: f64) -> bool {
        match self.value_mut(key) {
            Some(slot) => {
                *slot = value;
                true
            }
            None => false,
        }
    }

    /// Adds `delta` to an existing variable.
    pub fn add(&mut self, key: VarKey, delta: f64) -> bool {
        match self.value_mut(key) {
            Some(slot) => {
                *slot += delta;
                true
            }
            None => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &StateVar> {
        self.vars.iter()
    }

    /// Every variable with the given name, in declaration order.
    pub fn named(&self, name: &'static str) -> impl Iterator<Item = &StateVar> {
        self.vars.iter().filter(move |v| v.name == name)
    }

    /// Mutable values of every variable with the given name.
    pub fn named_values_mut(&mut self, name: &'static str) -> impl Iterator<Item = (AddressId, &mut f64)> {
        self.vars.iter_mut().filter(move |v| v.name == name).map(|v| (v.owner, &mut v.value))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Sum of all variables carrying `unit`, in declaration order.
    pub fn total(&self, unit: Unit) -> f64 {
        self.vars.iter().filter(|v| v.unit == unit).map(|v| v.value).sum()
    }
}

/// Bit-level equality, independent of declaration order.
impl PartialEq for GlobalState {
    fn eq(&self, other: &Self) -> bool {
        self.vars.len() == other.vars.len() && self.vars.iter().all(|v| other.get(v.key()).is_some_and(|w| v.bit_eq(w)))
    }
}
