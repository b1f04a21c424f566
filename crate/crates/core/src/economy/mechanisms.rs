//! Economy mechanisms registered with the engine.
//!
//! Each day's block runs, in order: subsidy release, developer onboarding,
//! user growth, fee settlement and the price update. Mechanisms read the
//! state as left by the preceding transactions of the block, so the block
//! composes the daily steps in that order.

use crate::engine::{AddressId, Footprint, GlobalState, Mechanism, MechanismId, StateVar, Unit, VarKey, VarSet};

use super::accounts::{self, vars, PLATFORM};
use super::behavior::{self, update_users};
use super::pool::{FeeDestination, SubsidyPool};
use super::EconomyParams;

pub const DISBURSE: MechanismId = MechanismId("subsidy.disburse");
pub const ONBOARD: MechanismId = MechanismId("platform.onboard");
pub const GROW_USERS: MechanismId = MechanismId("platform.grow_users");
pub const SETTLE: MechanismId = MechanismId("platform.settle_fees");
pub const UPDATE_PRICE: MechanismId = MechanismId("market.update_price");

#[derive(Debug, Clone, PartialEq)]
pub enum EconomyAction {
    /// Release `dt` days of decay from the pool to developers.
    Disburse {
        dt: f64,
    },
    /// Onboard `arrivals` developers, each deploying one app. `expected` is
    /// the arrival rate the draw was made from.
    Onboard {
        arrivals: u32,
        expected: f64,
    },
    GrowUsers,
    Settle,
    UpdatePrice {
        noise_factor: f64,
    },
}

fn key(k: VarKey) -> VarSet {
    VarSet::Key(k)
}

fn wrong_action(id: MechanismId, action: &EconomyAction) -> String {
    format!("{id} cannot execute {action:?}")
}

/// Exponential release from the pool, split equally across developer
/// wallets. With no developers yet, the release waits in escrow.
#[derive(Debug, Clone)]
pub struct DisburseMechanism {
    pub decay_rate: f64,
}

impl Mechanism<EconomyAction> for DisburseMechanism {
    fn id(&self) -> MechanismId {
        DISBURSE
    }

    fn footprint(&self, _: &GlobalState, _: AddressId, _: &EconomyAction) -> Footprint {
        Footprint::default()
            .read(key(vars::PRICE))
            .guard(key(vars::POOL_XNS))
            .guard(key(vars::POOL_ESCROW))
            .guard(key(vars::CUM_DISBURSED))
            .guard(key(vars::CUM_SUBSIDY_USD))
            .open(VarSet::Named(vars::DEV_BALANCE))
    }

    fn check(&self, _: &GlobalState, _: AddressId, action: &EconomyAction) -> Result<(), String> {
        match action {
            EconomyAction::Disburse { dt } if *dt > 0.0 && dt.is_finite() => Ok(()),
            EconomyAction::Disburse { dt } => Err(format!("disbursement interval must be positive, got {dt}")),
            other => Err(wrong_action(DISBURSE, other)),
        }
    }

    fn apply(&self, state: &mut GlobalState, _: AddressId, action: &EconomyAction) {
        let EconomyAction::Disburse { dt } = *action else { return };
        let pool = SubsidyPool {
            balance: state.value_or_zero(vars::POOL_XNS),
            decay_rate: self.decay_rate,
            replenish_enabled: true,
            cumulative_disbursed: state.value_or_zero(vars::CUM_DISBURSED),
            cumulative_replenished: 0.0,
        };
        let (amount, next) = pool.disburse(dt);
        let price = state.value_or_zero(vars::PRICE);
        state.set(vars::POOL_XNS, next.balance);
        state.set(vars::CUM_DISBURSED, next.cumulative_disbursed);
        state.add(vars::CUM_SUBSIDY_USD, amount * price);

        let escrow = state.value_or_zero(vars::POOL_ESCROW);
        let developers = state.named(vars::DEV_BALANCE).count();
        if developers == 0 {
            state.set(vars::POOL_ESCROW, escrow + amount);
            return;
        }
        let share = (amount + escrow) / developers as f64;
        for (_, balance) in state.named_values_mut(vars::DEV_BALANCE) {
            *balance += share;
        }
        state.set(vars::POOL_ESCROW, 0.0);
    }
}

/// Declares wallets for newly arrived developers. Wallets are owned by the
/// developer and controlled by the platform, which meters and debits fees.
#[derive(Debug, Clone, Default)]
pub struct OnboardMechanism;

impl OnboardMechanism {
    fn new_wallets(state: &GlobalState, arrivals: u32) -> impl Iterator<Item = VarKey> {
        let first = state.value_or_zero(vars::NEXT_ADDRESS) as u32;
        (0..arrivals).map(move |i| VarKey::new(AddressId(first + i), vars::DEV_BALANCE))
    }
}

impl Mechanism<EconomyAction> for OnboardMechanism {
    fn id(&self) -> MechanismId {
        ONBOARD
    }

    fn footprint(&self, state: &GlobalState, _: AddressId, action: &EconomyAction) -> Footprint {
        let mut fp = Footprint::default()
            .guard(key(vars::NEXT_ADDRESS))
            .guard(key(vars::N_DEVELOPERS))
            .guard(key(vars::N_APPS))
            .guard(key(vars::ARRIVAL_BACKLOG));
        if let EconomyAction::Onboard { arrivals, .. } = *action {
            fp.open.extend(Self::new_wallets(state, arrivals).map(VarSet::Key));
        }
        fp
    }

    fn check(&self, state: &GlobalState, _: AddressId, action: &EconomyAction) -> Result<(), String> {
        let EconomyAction::Onboard { arrivals, expected } = *action else {
            return Err(wrong_action(ONBOARD, action));
        };
        if !(expected >= 0.0 && expected.is_finite()) {
            return Err(format!("expected arrivals must be finite and non-negative, got {expected}"));
        }
        let next = state.value_or_zero(vars::NEXT_ADDRESS);
        if next + arrivals as f64 > u32::MAX as f64 {
            return Err("developer address space exhausted".into());
        }
        match Self::new_wallets(state, arrivals).find(|k| state.contains(*k)) {
            Some(taken) => Err(format!("wallet {taken} already exists")),
            None => Ok(()),
        }
    }

    fn apply(&self, state: &mut GlobalState, _: AddressId, action: &EconomyAction) {
        let EconomyAction::Onboard { arrivals, expected } = *action else { return };
        let wallets: Vec<VarKey> = Self::new_wallets(state, arrivals).collect();
        for wallet in wallets {
            state
                .declare(StateVar::new(wallet.owner, PLATFORM, wallet.name, 0.0, Unit::Xns))
                .expect("checked: wallet is new");
        }
        let n = arrivals as f64;
        state.add(vars::NEXT_ADDRESS, n);
        state.add(vars::N_DEVELOPERS, n);
        state.add(vars::N_APPS, n);
        state.add(vars::ARRIVAL_BACKLOG, expected - n);
    }
}

#[derive(Debug, Clone)]
pub struct GrowUsersMechanism {
    pub params: EconomyParams,
}

impl Mechanism<EconomyAction> for GrowUsersMechanism {
    fn id(&self) -> MechanismId {
        GROW_USERS
    }

    fn footprint(&self, _: &GlobalState, _: AddressId, _: &EconomyAction) -> Footprint {
        Footprint::default().read(key(vars::N_APPS)).guard(key(vars::N_USERS))
    }

    fn check(&self, _: &GlobalState, _: AddressId, action: &EconomyAction) -> Result<(), String> {
        match action {
            EconomyAction::GrowUsers => Ok(()),
            other => Err(wrong_action(GROW_USERS, other)),
        }
    }

    fn apply(&self, state: &mut GlobalState, _: AddressId, _: &EconomyAction) {
        let users = state.value_or_zero(vars::N_USERS);
        let apps = state.value_or_zero(vars::N_APPS);
        state.set(vars::N_USERS, update_users(users, apps, &self.params));
    }
}

/// Charges the day's resource fees to developer wallets in proportion to
/// their balances. Providers receive `1 − τ` of what was paid; the platform
/// share `τ` replenishes the pool, or goes to the treasury when
/// replenishment is off.
#[derive(Debug, Clone)]
pub struct SettleMechanism {
    pub params: EconomyParams,
    pub replenish: bool,
}

impl Mechanism<EconomyAction> for SettleMechanism {
    fn id(&self) -> MechanismId {
        SETTLE
    }

    fn footprint(&self, _: &GlobalState, _: AddressId, _: &EconomyAction) -> Footprint {
        Footprint::default()
            .read(key(vars::N_USERS))
            .read(key(vars::PRICE))
            .guard(key(vars::FEES_USD))
            .guard(key(vars::CUM_SHORTFALL))
            .guard(VarSet::Named(vars::DEV_BALANCE))
            .open(key(vars::PROVIDER_XNS))
            .open(key(vars::POOL_XNS))
            .open(key(vars::CUM_REPLENISHED))
            .open(key(vars::TREASURY_XNS))
    }

    fn check(&self, state: &GlobalState, _: AddressId, action: &EconomyAction) -> Result<(), String> {
        if !matches!(action, EconomyAction::Settle) {
            return Err(wrong_action(SETTLE, action));
        }
        let price = state.value_or_zero(vars::PRICE);
        if !(price > 0.0) {
            return Err(format!("cannot convert fees at price {price}"));
        }
        Ok(())
    }

    fn apply(&self, state: &mut GlobalState, _: AddressId, _: &EconomyAction) {
        let fees_usd = behavior::compute_fees(state.value_or_zero(vars::N_USERS), &self.params);
        state.set(vars::FEES_USD, fees_usd);

        let held = accounts::developer_balance(state);
        let price = state.value_or_zero(vars::PRICE);
        let settlement = behavior::settle_fee_flows(held, fees_usd, price, self.params.platform_fee_rate)
            .expect("checked: positive price");
        if settlement.paid_xns <= 0.0 {
            state.add(vars::CUM_SHORTFALL, settlement.shortfall_xns);
            return;
        }

        // Debit wallets and sum what actually left them, so credits match debits.
        let fraction = settlement.debit_fraction;
        let mut paid = 0.0;
        for (_, balance) in state.named_values_mut(vars::DEV_BALANCE) {
            let debit = if fraction >= 1.0 { *balance } else { *balance * fraction };
            *balance -= debit;
            paid += debit;
        }
        if settlement.shortfall_xns > 0.0 {
            log::trace!("fee shortfall: {:.6} XNS due, {:.6} XNS held by developers", settlement.due_xns, held);
            state.add(vars::CUM_SHORTFALL, settlement.shortfall_xns);
        }

        let platform_fees = self.params.platform_fee_rate * paid;
        state.add(vars::PROVIDER_XNS, paid - platform_fees);

        let pool = SubsidyPool {
            balance: state.value_or_zero(vars::POOL_XNS),
            decay_rate: 0.0,
            replenish_enabled: self.replenish,
            cumulative_disbursed: 0.0,
            cumulative_replenished: state.value_or_zero(vars::CUM_REPLENISHED),
        };
        match pool.replenish(platform_fees).expect("non-negative fees") {
            (next, FeeDestination::Pool) => {
                state.set(vars::POOL_XNS, next.balance);
                state.set(vars::CUM_REPLENISHED, next.cumulative_replenished);
            }
            (_, FeeDestination::Treasury) => {
                state.add(vars::TREASURY_XNS, platform_fees);
            }
        }
    }
}

/// Re-prices the token from the day's fees and the circulating supply
/// (developer and provider balances; treasury, pool and escrow are locked).
#[derive(Debug, Clone)]
pub struct PriceMechanism {
    pub params: EconomyParams,
}

impl Mechanism<EconomyAction> for PriceMechanism {
    fn id(&self) -> MechanismId {
        UPDATE_PRICE
    }

    fn footprint(&self, _: &GlobalState, _: AddressId, _: &EconomyAction) -> Footprint {
        Footprint::default()
            .read(key(vars::FEES_USD))
            .read(key(vars::PROVIDER_XNS))
            .read(VarSet::Named(vars::DEV_BALANCE))
            .guard(key(vars::DEMAND_EMA))
            .guard(key(vars::PRICE))
    }

    fn check(&self, _: &GlobalState, _: AddressId, action: &EconomyAction) -> Result<(), String> {
        match action {
            EconomyAction::UpdatePrice { noise_factor } if *noise_factor > 0.0 && noise_factor.is_finite() => Ok(()),
            EconomyAction::UpdatePrice { noise_factor } => {
                Err(format!("noise factor must be positive and finite, got {noise_factor}"))
            }
            other => Err(wrong_action(UPDATE_PRICE, other)),
        }
    }

    fn apply(&self, state: &mut GlobalState, _: AddressId, action: &EconomyAction) {
        let EconomyAction::UpdatePrice { noise_factor } = *action else { return };
        let fees = state.value_or_zero(vars::FEES_USD);
        let ema = state.value_or_zero(vars::DEMAND_EMA);
        let circulating = accounts::circulating_supply(state);
        let (demand, price) = match behavior::update_price(fees, ema, circulating, &self.params, noise_factor) {
            Ok(u) => (u.demand_ema_usd, u.price_usd),
            // nothing circulates yet: demand still accrues, price sits on the floor
            Err(_) => (behavior::smooth_demand(fees, ema, &self.params), self.params.price_floor_usd),
        };
        state.set(vars::DEMAND_EMA, demand);
        state.set(vars::PRICE, price);
    }
}
