use super::mechanism::{Footprint, Mechanism, MechanismId, VarSet};
use super::state::{AddressId, GlobalState, VarKey};

/// Move `amount` tokens from `from`'s balance variable to `to`'s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer {
    pub from: AddressId,
    pub to: AddressId,
    pub amount: f64,
}

impl Transfer {
    pub fn new(from: AddressId, to: AddressId, amount: f64) -> Self {
        Self { from, to, amount }
    }
}

/// Plain token transfer between balance variables named `balance_var`.
///
/// The debited balance is a guarded write; crediting the recipient is open.
#[derive(Debug, Clone, Copy)]
pub struct TransferMechanism {
    id: MechanismId,
    balance_var: &'static str,
}

impl TransferMechanism {
    pub fn new(id: MechanismId, balance_var: &'static str) -> Self {
        Self { id, balance_var }
    }

    fn keys(&self, action: &Transfer) -> (VarKey, VarKey) {
        (VarKey::new(action.from, self.balance_var), VarKey::new(action.to, self.balance_var))
    }
}

impl Mechanism<Transfer> for TransferMechanism {
    fn id(&self) -> MechanismId {
        self.id
    }

    fn footprint(&self, _state: &GlobalState, _agent: AddressId, action: &Transfer) -> Footprint {
        let (from, to) = self.keys(action);
        Footprint::default().guard(VarSet::Key(from)).open(VarSet::Key(to))
    }

    fn check(&self, state: &GlobalState, _agent: AddressId, action: &Transfer) -> Result<(), String> {
        if !(action.amount >= 0.0 && action.amount.is_finite()) {
            return Err(format!("transfer amount {} is not a finite non-negative number", action.amount));
        }
        let (from, to) = self.keys(action);
        let balance = state.value(from).ok_or_else(|| format!("no balance {from}"))?;
        if !state.contains(to) {
            return Err(format!("no balance {to}"));
        }
        if action.amount > balance {
            return Err(format!("overdraft: {} requested, {} available in {from}", action.amount, balance));
        }
        Ok(())
    }

    fn apply(&self, state: &mut GlobalState, _agent: AddressId, action: &Transfer) {
        let (from, to) = self.keys(action);
        state.add(from, -action.amount);
        state.add(to, action.amount);
    }
}
