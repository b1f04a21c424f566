use std::fmt;

use super::state::{AddressId, GlobalState, VarKey};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MechanismId(pub &'static str);

impl fmt::Display for MechanismId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// A set of state variables named in a footprint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSet {
    Key(VarKey),
    /// Every variable carrying this name, whoever owns it.
    Named(&'static str),
}

impl VarSet {
    fn overlaps(&self, other: &VarSet) -> bool {
        match (self, other) {
            (VarSet::Key(a), VarSet::Key(b)) => a == b,
            (VarSet::Key(k), VarSet::Named(n)) | (VarSet::Named(n), VarSet::Key(k)) => k.name == *n,
            (VarSet::Named(a), VarSet::Named(b)) => a == b,
        }
    }
}

/// The variables a transaction reads and writes.
///
/// `guarded` writes require the transacting agent to be the variable's
/// controller. `open` writes are deposits and declarations that any agent
/// may cause (crediting someone else's balance, creating a new variable).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Footprint {
    pub reads: Vec<VarSet>,
    pub guarded: Vec<VarSet>,
    pub open: Vec<VarSet>,
}

impl Footprint {
    pub fn read(mut self, set: VarSet) -> Self {
        self.reads.push(set);
        self
    }

    pub fn guard(mut self, set: VarSet) -> Self {
        self.guarded.push(set);
        self
    }

    pub fn open(mut self, set: VarSet) -> Self {
        self.open.push(set);
        self
    }

    pub fn writes(&self) -> impl Iterator<Item = &VarSet> {
        self.guarded.iter().chain(self.open.iter())
    }

    pub fn touches(&self) -> impl Iterator<Item = &VarSet> {
        self.reads.iter().chain(self.writes())
    }

    /// True when neither footprint writes anything the other touches.
    pub fn is_independent_of(&self, other: &Footprint) -> bool {
        let clash = |w: &Footprint, t: &Footprint| w.writes().any(|a| t.touches().any(|b| a.overlaps(b)));
        !clash(self, other) && !clash(other, self)
    }
}

/// A declared state-transition operator `f: X × U → X`.
///
/// `apply` must be deterministic and may only touch variables listed in
/// `footprint`. The engine calls it only after `check` has accepted the
/// action and every guarded write has passed the control check, so `apply`
/// itself cannot fail.
pub trait Mechanism<A>: Send + Sync {
    fn id(&self) -> MechanismId;

    fn footprint(&self, state: &GlobalState, agent: AddressId, action: &A) -> Footprint;

    /// Mechanism-specific validity (action shape, sufficient funds, ...).
    fn check(&self, state: &GlobalState, agent: AddressId, action: &A) -> Result<(), String>;

    fn apply(&self, state: &mut GlobalState, agent: AddressId, action: &A);
}

/// `t = (a, f, u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transaction<A> {
    pub agent: AddressId,
    pub mechanism: MechanismId,
    pub action: A,
}

impl<A> Transaction<A> {
    pub fn new(agent: AddressId, mechanism: MechanismId, action: A) -> Self {
        Self { agent, mechanism, action }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Rejection {
    #[error("unknown mechanism `{0}`")]
    UnknownMechanism(MechanismId),
    #[error("agent {agent} does not control {var}")]
    Unauthorized { agent: AddressId, var: VarKey },
    #[error("invalid action: {0}")]
    MechanismInvalid(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(owner: u32, name: &'static str) -> VarSet {
        VarSet::Key(VarKey::new(AddressId(owner), name))
    }

    #[test]
    fn disjoint_footprints_are_independent() {
        let a = Footprint::default().guard(key(1, "b")).open(key(2, "b"));
        let b = Footprint::default().guard(key(3, "b")).open(key(4, "b"));
        assert!(a.is_independent_of(&b));
    }

    #[test]
    fn shared_reads_do_not_conflict() {
        let a = Footprint::default().read(key(9, "price")).guard(key(1, "b"));
        let b = Footprint::default().read(key(9, "price")).guard(key(2, "b"));
        assert!(a.is_independent_of(&b));
    }

    #[test]
    fn write_read_overlap_conflicts() {
        let a = Footprint::default().guard(key(1, "b"));
        let b = Footprint::default().read(key(1, "b")).guard(key(2, "b"));
        assert!(!a.is_independent_of(&b));
        assert!(!b.is_independent_of(&a));
    }

    #[test]
    fn named_sets_overlap_matching_keys() {
        let a = Footprint::default().open(VarSet::Named("dev"));
        let b = Footprint::default().guard(key(7, "dev"));
        let c = Footprint::default().guard(key(7, "other"));
        assert!(!a.is_independent_of(&b));
        assert!(a.is_independent_of(&c));
    }
}
