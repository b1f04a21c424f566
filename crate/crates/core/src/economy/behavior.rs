//! Adoption, fee and price model.
//!
//! None of this is calibrated against a real network. Developers arrive as
//! a Poisson process whose rate grows with the dollar value of the daily
//! subsidy, users grow logistically with the number of deployed apps, fees
//! are linear in users, and the token price follows the equation of
//! exchange `P = D / (V·S)` on an exponentially smoothed annual demand.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use super::{EconomyError, EconomyParams};

/// Expected developer arrivals per day for a given daily subsidy value.
pub fn arrival_rate(daily_subsidy_usd: f64, params: &EconomyParams) -> f64 {
    params.dev_arrival_base_rate
        * (1.0 + params.dev_attractiveness_coeff * daily_subsidy_usd.max(0.0) / params.subsidy_usd_scale)
}

/// Poisson draw with mean `mu`.
pub fn developer_arrivals<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> u32 {
    if !(mu > 0.0) {
        return 0;
    }
    let poisson = Poisson::new(mu).expect("positive finite rate");
    let draw: f64 = poisson.sample(rng);
    draw as u32
}

/// Noise-free arrivals: realise the integer part of the accumulated
/// expectation. `backlog` is expected-minus-realised so far, in `[0, 1)`.
pub fn expected_arrivals(mu: f64, backlog: f64) -> u32 {
    (backlog + mu.max(0.0)).floor().max(0.0) as u32
}

/// Logistic growth driven by the number of apps, clamped to `[0, K]`.
pub fn update_users(users: f64, n_apps: f64, params: &EconomyParams) -> f64 {
    let cap = params.user_carrying_capacity;
    let next = users + params.user_growth_rate * n_apps * (1.0 - users / cap);
    next.clamp(0.0, cap)
}

pub fn compute_fees(users: f64, params: &EconomyParams) -> f64 {
    users * params.fee_per_user_usd_day
}

/// Result of charging one day of resource fees to developers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeeSettlement {
    /// Fees owed, in XNS.
    pub due_xns: f64,
    /// Fees actually paid: `due_xns` capped at what developers hold.
    pub paid_xns: f64,
    /// Fraction of every developer balance that is debited.
    pub debit_fraction: f64,
    /// `(1 − τ)·paid`, to resource providers.
    pub to_providers: f64,
    /// `τ·paid`, platform fees that replenish the pool.
    pub platform_fees: f64,
    pub shortfall_xns: f64,
}

/// Converts `fees_usd` to XNS at `price` and splits what developers can pay
/// between providers and the platform.
pub fn settle_fee_flows(
    developer_balance: f64,
    fees_usd: f64,
    price: f64,
    fee_rate: f64,
) -> Result<FeeSettlement, EconomyError> {
    if !(price > 0.0) {
        return Err(EconomyError::InvalidInput(format!("price must be positive, got {price}")));
    }
    let due_xns = fees_usd.max(0.0) / price;
    let available = developer_balance.max(0.0);
    let paid_xns = due_xns.min(available);
    let debit_fraction = if available > 0.0 { paid_xns / available } else { 0.0 };
    let platform_fees = fee_rate * paid_xns;
    Ok(FeeSettlement {
        due_xns,
        paid_xns,
        debit_fraction,
        to_providers: paid_xns - platform_fees,
        platform_fees,
        shortfall_xns: due_xns - paid_xns,
    })
}

/// Updated demand average and price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceUpdate {
    pub demand_ema_usd: f64,
    pub price_usd: f64,
}

/// Folds today's fees into the annualised demand average and prices the
/// circulating supply. The floor is applied after the noise factor, so the
/// returned price never drops below it.
pub fn update_price(
    fees_usd: f64,
    demand_ema_usd: f64,
    circulating_xns: f64,
    params: &EconomyParams,
    noise_factor: f64,
) -> Result<PriceUpdate, EconomyError> {
    if !(circulating_xns > 0.0) {
        return Err(EconomyError::InvalidInput(format!("circulating supply must be positive, got {circulating_xns}")));
    }
    let demand = smooth_demand(fees_usd, demand_ema_usd, params);
    let fundamental = demand / (params.velocity_per_year * circulating_xns);
    Ok(PriceUpdate { demand_ema_usd: demand, price_usd: (fundamental * noise_factor).max(params.price_floor_usd) })
}

pub(crate) fn smooth_demand(fees_usd: f64, demand_ema_usd: f64, params: &EconomyParams) -> f64 {
    let a = params.demand_ema_alpha;
    a * (365.0 * fees_usd) + (1.0 - a) * demand_ema_usd
}

/// Mean-one lognormal multiplier `exp(σz − σ²/2)`.
pub fn lognormal_factor<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    if sigma <= 0.0 {
        return 1.0;
    }
    let z: f64 = StandardNormal.sample(rng);
    (sigma * z - 0.5 * sigma * sigma).exp()
}
