//! Engine model shared by the property tests and the acceptance suite.

#![allow(clippy::result_large_err)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

use tokensim::engine::{
    AddressId, Commutation, Engine, Footprint, GlobalState, Mechanism, MechanismId, StateVar, Transaction, Transfer,
    TransferMechanism, Unit, VarKey, VarSet,
};

const MOVE: MechanismId = MechanismId("move");
const SCALE: MechanismId = MechanismId("scale");
const GHOST: MechanismId = MechanismId("ghost");
const ADDRESSES: u32 = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Move(Transfer),
    Scale { target: AddressId, factor: f64 },
}

/// Adapts the stock transfer mechanism to `Op`.
struct Move(TransferMechanism);

impl Mechanism<Op> for Move {
    fn id(&self) -> MechanismId {
        MOVE
    }

    fn footprint(&self, s: &GlobalState, agent: AddressId, op: &Op) -> Footprint {
        match op {
            Op::Move(t) => self.0.footprint(s, agent, t),
            Op::Scale { .. } => Footprint::default(),
        }
    }

    fn check(&self, s: &GlobalState, agent: AddressId, op: &Op) -> Result<(), String> {
        match op {
            Op::Move(t) => self.0.check(s, agent, t),
            Op::Scale { .. } => Err("not a transfer".into()),
        }
    }

    fn apply(&self, s: &mut GlobalState, agent: AddressId, op: &Op) {
        if let Op::Move(t) = op {
            self.0.apply(s, agent, t);
        }
    }
}

/// Multiplies a `score` variable.
struct Scale;

impl Mechanism<Op> for Scale {
    fn id(&self) -> MechanismId {
        SCALE
    }

    fn footprint(&self, _: &GlobalState, _: AddressId, op: &Op) -> Footprint {
        match op {
            Op::Scale { target, .. } => Footprint::default().guard(VarSet::Key(VarKey::new(*target, "score"))),
            Op::Move(_) => Footprint::default(),
        }
    }

    fn check(&self, s: &GlobalState, _: AddressId, op: &Op) -> Result<(), String> {
        match op {
            Op::Scale { target, factor } if *factor >= 0.0 && s.contains(VarKey::new(*target, "score")) => Ok(()),
            _ => Err("bad scale".into()),
        }
    }

    fn apply(&self, s: &mut GlobalState, _: AddressId, op: &Op) {
        if let Op::Scale { target, factor } = op {
            let key = VarKey::new(*target, "score");
            let v = s.value_or_zero(key);
            s.set(key, v * factor);
        }
    }
}

pub fn engine() -> Engine<Op> {
    let mut e = Engine::new();
    e.register_mechanism(Move(TransferMechanism::new(MOVE, "xns"))).unwrap();
    e.register_mechanism(Scale).unwrap();
    e
}

/// Balances and scores for every address; each score's controller is drawn
/// separately so some scores are controlled by someone else.
pub fn arb_state() -> impl Strategy<Value = GlobalState> {
    (
        prop::collection::vec(0u32..100, ADDRESSES as usize),
        prop::collection::vec((0.0f64..10.0, 0..ADDRESSES), ADDRESSES as usize),
    )
        .prop_map(|(balances, scores)| {
            let mut s = GlobalState::new();
            for (i, (b, (score, controller))) in balances.into_iter().zip(scores).enumerate() {
                let a = AddressId(i as u32);
                s.declare(StateVar::local(a, "xns", b as f64, Unit::Xns)).unwrap();
                s.declare(StateVar::new(a, AddressId(controller), "score", score, Unit::Count)).unwrap();
            }
            s
        })
}

pub fn arb_tx() -> impl Strategy<Value = Transaction<Op>> {
    let addr = || (0..ADDRESSES + 1).prop_map(AddressId);
    prop_oneof![
        6 => (addr(), addr(), addr(), 0u32..150, any::<bool>()).prop_map(|(agent, from, to, amount, owner)| {
            let agent = if owner { from } else { agent };
            Transaction::new(agent, MOVE, Op::Move(Transfer::new(from, to, amount as f64)))
        }),
        3 => (addr(), addr(), 0.0f64..3.0).prop_map(|(agent, target, factor)| {
            Transaction::new(agent, SCALE, Op::Scale { target, factor })
        }),
        1 => addr().prop_map(|agent| Transaction::new(agent, GHOST, Op::Scale { target: agent, factor: 1.0 })),
    ]
}

/// Property runner: `cases` accepted cases, generous room for discarded ones.
pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, max_global_rejects: 100 * cases, failure_persistence: None, ..Config::default() })
}

type Outcome<T> = Result<(), TestError<T>>;

/// Applying a block equals folding `apply_transaction` over it, skipping rejections.
pub fn block_is_a_fold(runner: &mut TestRunner) -> Outcome<(GlobalState, Vec<Transaction<Op>>)> {
    runner.run(&(arb_state(), prop::collection::vec(arb_tx(), 0..24)), |(state, txs)| {
        let e = engine();
        let receipt = e.apply_block(&state, &txs);
        let folded = txs.iter().fold(state.clone(), |s, tx| e.apply_transaction(&s, tx).unwrap_or(s));
        prop_assert_eq!(&receipt.state, &folded);
        prop_assert_eq!(receipt.applied.len() + receipt.rejected.len(), txs.len());
        let replayed = receipt.applied.iter().try_fold(state, |s, tx| e.apply_transaction(&s, tx));
        prop_assert_eq!(replayed.unwrap(), folded);
        Ok(())
    })
}

/// Transactions with disjoint footprints give the same state in either order.
pub fn disjoint_commute(runner: &mut TestRunner) -> Outcome<(GlobalState, Transaction<Op>, Transaction<Op>)> {
    runner.run(&(arb_state(), arb_tx(), arb_tx()), |(state, a, b)| {
        let e = engine();
        let (fa, fb) = (e.footprint(&state, &a).ok(), e.footprint(&state, &b).ok());
        if !matches!((&fa, &fb), (Some(x), Some(y)) if x.is_independent_of(y)) {
            return Err(TestCaseError::reject("footprints overlap"));
        }
        let both_valid = e.validate_transaction(&state, &a).is_ok() && e.validate_transaction(&state, &b).is_ok();
        match e.commutes(&state, &a, &b) {
            Commutation::Commute => prop_assert!(both_valid),
            Commutation::Rejected { .. } => prop_assert!(!both_valid),
            Commutation::Diverge => prop_assert!(false, "independent transactions diverged"),
        }
        Ok(())
    })
}

/// A rejected transaction leaves the state bit-for-bit unchanged.
pub fn rejection_is_inert(runner: &mut TestRunner) -> Outcome<(GlobalState, Transaction<Op>)> {
    runner.run(&(arb_state(), arb_tx()), |(state, tx)| {
        let e = engine();
        if e.validate_transaction(&state, &tx).is_ok() {
            return Err(TestCaseError::reject("valid transaction"));
        }
        prop_assert!(e.apply_transaction(&state, &tx).is_err());
        let mut in_place = state.clone();
        prop_assert!(e.apply_transaction_in_place(&mut in_place, &tx).is_err());
        prop_assert_eq!(&in_place, &state);
        let receipt = e.apply_block(&state, std::slice::from_ref(&tx));
        prop_assert_eq!(&receipt.state, &state);
        prop_assert_eq!(receipt.rejected.len(), 1);
        Ok(())
    })
}

/// Transfers move tokens without creating, destroying or overdrawing them.
pub fn transfers_conserve(runner: &mut TestRunner) -> Outcome<(GlobalState, Vec<Transaction<Op>>)> {
    runner.run(&(arb_state(), prop::collection::vec(arb_tx(), 0..24)), |(state, txs)| {
        let after = engine().apply_block(&state, &txs).state;
        prop_assert_eq!(after.total(Unit::Xns), state.total(Unit::Xns));
        prop_assert!(after.iter().filter(|v| v.unit == Unit::Xns).all(|v| v.value >= 0.0));
        Ok(())
    })
}
