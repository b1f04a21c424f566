//! Discrete-time ledger state-space engine.
//!
//! A ledger is a global state `X` plus the ordered log of blocks applied to
//! it since genesis. Mechanisms are registered operators `f(X, u)`; agents
//! invoke them through transactions `(agent, mechanism, action)`. Each step
//! evaluates every due policy against `X(k)`, collects the resulting
//! transactions into a block and folds the block over the state to get
//! `X(k + 1)`.

mod mechanism;
mod noise;
mod policy;
mod state;
mod transfer;

use std::collections::HashMap;
use std::sync::Arc;

pub use mechanism::{Footprint, Mechanism, MechanismId, Rejection, Transaction, VarSet};
pub use noise::{EnvNoise, NoiseRng};
pub use policy::{Observation, ObservationFilter, Policy, Strategy};
pub use state::{AddressId, GlobalState, StateVar, Unit, VarKey};
pub use transfer::{Transfer, TransferMechanism};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("mechanism `{0}` is already registered")]
    DuplicateMechanism(MechanismId),
    #[error("state variable {0} is already declared")]
    PartitionViolation(VarKey),
    #[error("token balance {key} would be {value}")]
    NegativeBalance { key: VarKey, value: f64 },
    #[error("replay of block {block}, transaction {index} was rejected: {reason}")]
    ReplayDiverged { block: u64, index: usize, reason: Rejection },
}

/// A transaction that failed validation at its point in a block.
#[derive(Debug, Clone, PartialEq)]
pub struct Rejected<A> {
    pub index: usize,
    pub tx: Transaction<A>,
    pub reason: Rejection,
}

#[derive(Debug, Clone)]
pub struct BlockReceipt<A> {
    pub state: GlobalState,
    pub applied: Vec<Transaction<A>>,
    pub rejected: Vec<Rejected<A>>,
}

/// Outcome of [`Engine::commutes`].
#[derive(Debug, Clone, PartialEq)]
pub enum Commutation {
    Commute,
    /// Both orders are valid but end in different states.
    Diverge,
    /// One of the orders rejects a transaction.
    Rejected {
        a_first: bool,
        reason: Rejection,
    },
}

impl Commutation {
    pub fn holds(&self) -> bool {
        matches!(self, Commutation::Commute)
    }
}

/// `L = {X, T}` at block height `K`.
#[derive(Debug, Clone)]
pub struct LedgerState<A> {
    pub state: GlobalState,
    blocks: Vec<Arc<[Transaction<A>]>>,
}

impl<A> LedgerState<A> {
    pub fn genesis(state: GlobalState) -> Self {
        Self { state, blocks: Vec::new() }
    }

    /// Block height `K`: the number of blocks applied since genesis.
    pub fn height(&self) -> u64 {
        self.blocks.len() as u64
    }

    pub fn blocks(&self) -> &[Arc<[Transaction<A>]>] {
        &self.blocks
    }

    /// The transaction log `T`, flattened in application order.
    pub fn transactions(&self) -> impl Iterator<Item = &Transaction<A>> {
        self.blocks.iter().flat_map(|b| b.iter())
    }
}

/// Mechanism registry plus the state-transition operations built on it.
pub struct Engine<A> {
    mechanisms: Vec<Box<dyn Mechanism<A>>>,
    by_id: HashMap<MechanismId, usize>,
}

impl<A> Default for Engine<A> {
    fn default() -> Self {
        Self { mechanisms: Vec::new(), by_id: HashMap::new() }
    }
}

impl<A: Clone> Engine<A> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_mechanism(&mut self, mechanism: impl Mechanism<A> + 'static) -> Result<MechanismId, EngineError> {
        let id = mechanism.id();
        if self.by_id.contains_key(&id) {
            return Err(EngineError::DuplicateMechanism(id));
        }
        self.by_id.insert(id, self.mechanisms.len());
        self.mechanisms.push(Box::new(mechanism));
        Ok(id)
    }

    pub fn mechanism(&self, id: MechanismId) -> Option<&dyn Mechanism<A>> {
        self.by_id.get(&id).map(|&i| self.mechanisms[i].as_ref())
    }

    pub fn mechanism_ids(&self) -> impl Iterator<Item = MechanismId> + '_ {
        self.mechanisms.iter().map(|m| m.id())
    }

    pub fn footprint(&self, state: &GlobalState, tx: &Transaction<A>) -> Result<Footprint, Rejection> {
        let mechanism = self.mechanism(tx.mechanism).ok_or(Rejection::UnknownMechanism(tx.mechanism))?;
        Ok(mechanism.footprint(state, tx.agent, &tx.action))
    }

    pub fn validate_transaction(&self, state: &GlobalState, tx: &Transaction<A>) -> Result<(), Rejection> {
        let mechanism = self.mechanism(tx.mechanism).ok_or(Rejection::UnknownMechanism(tx.mechanism))?;
        let footprint = mechanism.footprint(state, tx.agent, &tx.action);
        for set in &footprint.guarded {
            check_control(state, tx.agent, set)?;
        }
        mechanism.check(state, tx.agent, &tx.action).map_err(Rejection::MechanismInvalid)
    }

    /// `X⁺ = f_t(X, u_t)`. A rejected transaction leaves `state` untouched.
    pub fn apply_transaction(&self, state: &GlobalState, tx: &Transaction<A>) -> Result<GlobalState, Rejection> {
        let mut next = state.clone();
        self.apply_transaction_in_place(&mut next, tx)?;
        Ok(next)
    }

    pub fn apply_transaction_in_place(&self, state: &mut GlobalState, tx: &Transaction<A>) -> Result<(), Rejection> {
        self.validate_transaction(state, tx)?;
        // validate_transaction succeeded, so the mechanism exists
        let mechanism = self.mechanism(tx.mechanism).expect("validated mechanism");
        mechanism.apply(state, tx.agent, &tx.action);
        Ok(())
    }

    /// Left fold of [`apply_transaction`](Self::apply_transaction) over `txs`.
    /// Invalid transactions are skipped and reported; the rest still apply.
    pub fn apply_block(&self, state: &GlobalState, txs: &[Transaction<A>]) -> BlockReceipt<A> {
        let mut next = state.clone();
        let (applied, rejected) = self.apply_block_in_place(&mut next, txs.to_vec());
        BlockReceipt { state: next, applied, rejected }
    }

    pub fn apply_block_in_place(
        &self,
        state: &mut GlobalState,
        txs: Vec<Transaction<A>>,
    ) -> (Vec<Transaction<A>>, Vec<Rejected<A>>) {
        let mut applied = Vec::with_capacity(txs.len());
        let mut rejected = Vec::new();
        for (index, tx) in txs.into_iter().enumerate() {
            match self.apply_transaction_in_place(state, &tx) {
                Ok(()) => applied.push(tx),
                Err(reason) => {
                    log::debug!("rejected tx {index} ({} by {}): {reason}", tx.mechanism, tx.agent);
                    rejected.push(Rejected { index, tx, reason });
                }
            }
        }
        (applied, rejected)
    }

    /// Whether applying `a` then `b` ends in exactly the same state as `b` then `a`.
    pub fn commutes(&self, state: &GlobalState, a: &Transaction<A>, b: &Transaction<A>) -> Commutation {
        let run = |first: &Transaction<A>, second: &Transaction<A>| -> Result<GlobalState, Rejection> {
            let mut s = state.clone();
            self.apply_transaction_in_place(&mut s, first)?;
            self.apply_transaction_in_place(&mut s, second)?;
            Ok(s)
        };
        let ab = match run(a, b) {
            Ok(s) => s,
            Err(reason) => return Commutation::Rejected { a_first: true, reason },
        };
        let ba = match run(b, a) {
            Ok(s) => s,
            Err(reason) => return Commutation::Rejected { a_first: false, reason },
        };
        if ab == ba {
            Commutation::Commute
        } else {
            Commutation::Diverge
        }
    }

    /// Evaluate every policy due at `step` against the observable part of
    /// `state`, in registration order.
    pub fn evaluate_policies(
        &self,
        state: &GlobalState,
        policies: &[Policy<A>],
        step: u64,
        noise: &EnvNoise,
    ) -> Vec<Transaction<A>> {
        let mut rng = noise.step_rng(step);
        policies
            .iter()
            .filter(|p| p.is_due(step))
            .filter_map(|p| {
                let view = Observation::new(state, &p.observation);
                p.strategy.decide(&view, step, &mut rng).map(|action| Transaction::new(p.agent, p.mechanism, action))
            })
            .collect()
    }

    /// Closed-loop update `X(k+1) = F_k(X(k))`; appends the applied block.
    pub fn step_ledger(&self, mut ledger: LedgerState<A>, policies: &[Policy<A>], noise: &EnvNoise) -> LedgerState<A> {
        let txs = self.evaluate_policies(&ledger.state, policies, ledger.height(), noise);
        let (applied, rejected) = self.apply_block_in_place(&mut ledger.state, txs);
        if !rejected.is_empty() {
            log::warn!("block {}: {} transaction(s) rejected", ledger.height() + 1, rejected.len());
        }
        ledger.blocks.push(applied.into());
        ledger
    }

    /// `[L(0), L(1), …, L(steps)]` with `L(0) = genesis`.
    pub fn run_trajectory(
        &self,
        genesis: LedgerState<A>,
        policies: &[Policy<A>],
        steps: u64,
        noise: &EnvNoise,
    ) -> Vec<LedgerState<A>> {
        let mut out = Vec::with_capacity(steps as usize + 1);
        out.push(genesis);
        for _ in 0..steps {
            let next = self.step_ledger(out.last().expect("non-empty").clone(), policies, noise);
            out.push(next);
        }
        out
    }

    /// Re-apply a ledger's log to `genesis`.
    pub fn replay(&self, genesis: &GlobalState, ledger: &LedgerState<A>) -> Result<GlobalState, EngineError> {
        let mut state = genesis.clone();
        for (k, block) in ledger.blocks.iter().enumerate() {
            for (index, tx) in block.iter().enumerate() {
                self.apply_transaction_in_place(&mut state, tx).map_err(|reason| EngineError::ReplayDiverged {
                    block: k as u64 + 1,
                    index,
                    reason,
                })?;
            }
        }
        Ok(state)
    }
}

fn check_control(state: &GlobalState, agent: AddressId, set: &VarSet) -> Result<(), Rejection> {
    match *set {
        VarSet::Key(key) => match state.get(key) {
            Some(var) if var.controller == agent => Ok(()),
            _ => Err(Rejection::Unauthorized { agent, var: key }),
        },
        VarSet::Named(name) => match state.named(name).find(|v| v.controller != agent) {
            Some(var) => Err(Rejection::Unauthorized { agent, var: var.key() }),
            None => Ok(()),
        },
    }
}
