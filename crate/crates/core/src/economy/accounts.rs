//! Fixed accounts of the economy and the state variables they declare.

use crate::engine::{AddressId, EngineError, GlobalState, StateVar, Unit};

/// Foundation treasury.
pub const TREASURY: AddressId = AddressId(0);
/// Developer subsidy pool.
pub const POOL: AddressId = AddressId(1);
/// Platform registry and fee meter. Controls developer wallets.
pub const PLATFORM: AddressId = AddressId(2);
/// Price oracle.
pub const MARKET: AddressId = AddressId(3);
/// All resource providers, aggregated.
pub const PROVIDER: AddressId = AddressId(4);
/// Developer addresses are handed out from here upwards.
pub const FIRST_DEVELOPER: u32 = 1000;

pub mod vars {
    use crate::engine::VarKey;

    use super::{MARKET, PLATFORM, POOL, PROVIDER, TREASURY};

    pub const BALANCE: &str = "xns";
    /// Developer wallets use their own name so they can be addressed as a set.
    pub const DEV_BALANCE: &str = "dev_xns";

    pub const TREASURY_XNS: VarKey = VarKey::new(TREASURY, BALANCE);
    pub const POOL_XNS: VarKey = VarKey::new(POOL, BALANCE);
    pub const POOL_ESCROW: VarKey = VarKey::new(POOL, "escrow_xns");
    pub const CUM_DISBURSED: VarKey = VarKey::new(POOL, "cum_disbursed_xns");
    pub const CUM_REPLENISHED: VarKey = VarKey::new(POOL, "cum_replenished_xns");
    pub const CUM_SUBSIDY_USD: VarKey = VarKey::new(POOL, "cum_subsidy_usd");
    pub const PROVIDER_XNS: VarKey = VarKey::new(PROVIDER, BALANCE);

    pub const N_DEVELOPERS: VarKey = VarKey::new(PLATFORM, "n_developers");
    pub const N_APPS: VarKey = VarKey::new(PLATFORM, "n_apps");
    pub const N_USERS: VarKey = VarKey::new(PLATFORM, "n_users");
    pub const FEES_USD: VarKey = VarKey::new(PLATFORM, "fees_usd");
    pub const CUM_SHORTFALL: VarKey = VarKey::new(PLATFORM, "cum_fee_shortfall_xns");
    pub const NEXT_ADDRESS: VarKey = VarKey::new(PLATFORM, "next_address");
    pub const ARRIVAL_BACKLOG: VarKey = VarKey::new(PLATFORM, "arrival_backlog");

    pub const PRICE: VarKey = VarKey::new(MARKET, "price_usd");
    pub const DEMAND_EMA: VarKey = VarKey::new(MARKET, "demand_ema_usd");
}

/// Genesis state: the pool holds `initial_pool`, the treasury the rest of
/// the supply, every other balance is zero and the price starts at `price`.
pub fn genesis_state(total_supply: f64, initial_pool: f64, price: f64) -> Result<GlobalState, EngineError> {
    let mut s = GlobalState::new();
    let local = |key: crate::engine::VarKey, value, unit| StateVar::local(key.owner, key.name, value, unit);
    for var in [
        local(vars::TREASURY_XNS, total_supply - initial_pool, Unit::Xns),
        local(vars::POOL_XNS, initial_pool, Unit::Xns),
        local(vars::POOL_ESCROW, 0.0, Unit::Xns),
        local(vars::CUM_DISBURSED, 0.0, Unit::XnsFlow),
        local(vars::CUM_REPLENISHED, 0.0, Unit::XnsFlow),
        local(vars::CUM_SUBSIDY_USD, 0.0, Unit::Usd),
        local(vars::PROVIDER_XNS, 0.0, Unit::Xns),
        local(vars::N_DEVELOPERS, 0.0, Unit::Count),
        local(vars::N_APPS, 0.0, Unit::Count),
        local(vars::N_USERS, 0.0, Unit::Count),
        local(vars::FEES_USD, 0.0, Unit::Usd),
        local(vars::CUM_SHORTFALL, 0.0, Unit::XnsFlow),
        local(vars::NEXT_ADDRESS, FIRST_DEVELOPER as f64, Unit::Count),
        local(vars::ARRIVAL_BACKLOG, 0.0, Unit::Rate),
        local(vars::PRICE, price, Unit::Usd),
        local(vars::DEMAND_EMA, 0.0, Unit::Usd),
    ] {
        s.declare(var)?;
    }
    Ok(s)
}

pub fn developer_balance(state: &GlobalState) -> f64 {
    state.named(vars::DEV_BALANCE).map(|v| v.value).sum()
}

/// Tokens outside the treasury and the pool.
///
/// Summed directly from the circulating balances rather than as
/// `supply − treasury − pool`, which would cancel catastrophically while
/// almost nothing circulates.
pub fn circulating_supply(state: &GlobalState) -> f64 {
    developer_balance(state) + state.value_or_zero(vars::PROVIDER_XNS)
}

/// Sum of every token balance.
pub fn total_supply(state: &GlobalState) -> f64 {
    state.total(Unit::Xns)
}
