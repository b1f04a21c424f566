//! Developer-subsidy token economy on top of the ledger engine.
//!
//! Token flows: the subsidy pool releases `λ` of its balance per day
//! (exactly `1 − e^(−λ)`) to developer wallets; developers pay resource
//! fees in XNS, of which `1 − τ` goes to resource providers and `τ` is a
//! platform fee that flows back into the pool. Everything moves through
//! engine transactions, so the token supply is conserved and the whole run
//! can be replayed from its transaction log.

pub mod accounts;
mod behavior;
mod mechanisms;
mod params;
mod policies;
mod pool;

use crate::engine::{Engine, EngineError, EnvNoise, GlobalState, LedgerState, Policy};
use crate::montecarlo::ScenarioConfig;

pub use accounts::{circulating_supply, developer_balance, total_supply};
pub use behavior::{
    arrival_rate, compute_fees, developer_arrivals, expected_arrivals, lognormal_factor, settle_fee_flows,
    update_price, update_users, FeeSettlement, PriceUpdate,
};
pub use mechanisms::{
    DisburseMechanism, EconomyAction, GrowUsersMechanism, OnboardMechanism, PriceMechanism, SettleMechanism, DISBURSE,
    GROW_USERS, ONBOARD, SETTLE, UPDATE_PRICE,
};
pub use params::EconomyParams;
pub use policies::economy_policies;
pub use pool::{analytic_pool_balance, pool_disburse, pool_replenish, FeeDestination, SubsidyPool};

use accounts::vars;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EconomyError {
    #[error("{0}")]
    InvalidInput(String),
    #[error("initial pool of {initial_pool} XNS exceeds the total supply of {total_supply} XNS")]
    PoolExceedsSupply { initial_pool: f64, total_supply: f64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One day of observed outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KpiRecord {
    pub t: u64,
    pub pool_balance_xns: f64,
    pub cum_subsidy_xns: f64,
    pub cum_subsidy_usd: f64,
    pub price_usd: f64,
    pub treasury_xns: f64,
    pub treasury_usd: f64,
    pub n_developers: f64,
    pub n_users: f64,
    pub fees_usd: f64,
    /// Platform fees returned to the pool so far. Not part of the CSV schema.
    pub cum_replenished_xns: f64,
}

impl KpiRecord {
    pub fn observe(t: u64, state: &GlobalState) -> Self {
        let price = state.value_or_zero(vars::PRICE);
        let treasury = state.value_or_zero(vars::TREASURY_XNS);
        Self {
            t,
            pool_balance_xns: state.value_or_zero(vars::POOL_XNS),
            cum_subsidy_xns: state.value_or_zero(vars::CUM_DISBURSED),
            cum_subsidy_usd: state.value_or_zero(vars::CUM_SUBSIDY_USD),
            price_usd: price,
            treasury_xns: treasury,
            treasury_usd: treasury * price,
            n_developers: state.value_or_zero(vars::N_DEVELOPERS),
            n_users: state.value_or_zero(vars::N_USERS),
            fees_usd: state.value_or_zero(vars::FEES_USD),
            cum_replenished_xns: state.value_or_zero(vars::CUM_REPLENISHED),
        }
    }
}

/// A wired-up economy: registered mechanisms plus the daily policies.
pub struct Economy {
    engine: Engine<EconomyAction>,
    policies: Vec<Policy<EconomyAction>>,
    params: EconomyParams,
    initial_pool: f64,
}

/// Genesis ledger and economy for a scenario.
pub fn build_economy(config: &ScenarioConfig) -> Result<(LedgerState<EconomyAction>, Economy), EconomyError> {
    let params = config.economy.clone();
    params.validate()?;
    let initial_pool = config.initial_pool_xns;
    if !(initial_pool >= 0.0) {
        return Err(EconomyError::InvalidInput(format!("initial pool must be non-negative, got {initial_pool}")));
    }
    if initial_pool > params.total_supply_xns {
        return Err(EconomyError::PoolExceedsSupply { initial_pool, total_supply: params.total_supply_xns });
    }
    let lambda = config.decay_rate_per_day;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(EconomyError::InvalidInput(format!("decay rate must be positive, got {lambda}")));
    }

    let mut engine = Engine::new();
    engine.register_mechanism(DisburseMechanism { decay_rate: lambda })?;
    engine.register_mechanism(OnboardMechanism)?;
    engine.register_mechanism(GrowUsersMechanism { params: params.clone() })?;
    engine.register_mechanism(SettleMechanism { params: params.clone(), replenish: config.toggles.replenish })?;
    engine.register_mechanism(PriceMechanism { params: params.clone() })?;

    let policies = economy_policies(&params, lambda, config.toggles.behavior, config.toggles.noise);
    let genesis = accounts::genesis_state(params.total_supply_xns, initial_pool, params.price_floor_usd)?;
    Ok((LedgerState::genesis(genesis), Economy { engine, policies, params, initial_pool }))
}

impl Economy {
    pub fn engine(&self) -> &Engine<EconomyAction> {
        &self.engine
    }

    pub fn policies(&self) -> &[Policy<EconomyAction>] {
        &self.policies
    }

    pub fn params(&self) -> &EconomyParams {
        &self.params
    }

    pub fn initial_pool(&self) -> f64 {
        self.initial_pool
    }

    /// Advances one day and reports the day's outcomes.
    pub fn step(
        &self,
        ledger: LedgerState<EconomyAction>,
        noise: &EnvNoise,
    ) -> (LedgerState<EconomyAction>, KpiRecord) {
        let next = self.engine.step_ledger(ledger, &self.policies, noise);
        let record = KpiRecord::observe(next.height(), &next.state);
        (next, record)
    }

    /// Runs `days` steps from `genesis`, returning the final ledger and one
    /// record per day (`t = 1..=days`).
    pub fn run(
        &self,
        genesis: LedgerState<EconomyAction>,
        noise: &EnvNoise,
        days: u64,
    ) -> (LedgerState<EconomyAction>, Vec<KpiRecord>) {
        let mut ledger = genesis;
        let mut records = Vec::with_capacity(days as usize);
        for _ in 0..days {
            let (next, record) = self.step(ledger, noise);
            records.push(record);
            ledger = next;
        }
        (ledger, records)
    }
}
