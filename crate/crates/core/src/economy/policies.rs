use crate::engine::{NoiseRng, Observation, ObservationFilter, Policy, Strategy};

use super::accounts::{vars, MARKET, PLATFORM, POOL};
use super::behavior::{arrival_rate, developer_arrivals, expected_arrivals, lognormal_factor};
use super::mechanisms::{EconomyAction, DISBURSE, GROW_USERS, ONBOARD, SETTLE, UPDATE_PRICE};
use super::EconomyParams;

/// The pool releases one day of decay every day.
struct DailyRelease;

impl Strategy<EconomyAction> for DailyRelease {
    fn decide(&self, _: &Observation<'_>, _: u64, _: &mut NoiseRng) -> Option<EconomyAction> {
        Some(EconomyAction::Disburse { dt: 1.0 })
    }
}

/// Developers respond to the dollar value of today's subsidy release.
struct DeveloperInflow {
    params: EconomyParams,
    decay_rate: f64,
    stochastic: bool,
}

impl Strategy<EconomyAction> for DeveloperInflow {
    fn decide(&self, view: &Observation<'_>, _: u64, rng: &mut NoiseRng) -> Option<EconomyAction> {
        let pool = view.value(vars::POOL_XNS)?;
        let price = view.value(vars::PRICE)?;
        let release = pool * -(-self.decay_rate).exp_m1();
        let mu = arrival_rate(release * price, &self.params);
        let arrivals = if self.stochastic {
            developer_arrivals(mu, rng)
        } else {
            expected_arrivals(mu, view.value(vars::ARRIVAL_BACKLOG)?)
        };
        Some(EconomyAction::Onboard { arrivals, expected: mu })
    }
}

struct Always(fn() -> EconomyAction);

impl Strategy<EconomyAction> for Always {
    fn decide(&self, _: &Observation<'_>, _: u64, _: &mut NoiseRng) -> Option<EconomyAction> {
        Some((self.0)())
    }
}

struct PriceOracle {
    sigma: f64,
    stochastic: bool,
}

impl Strategy<EconomyAction> for PriceOracle {
    fn decide(&self, _: &Observation<'_>, _: u64, rng: &mut NoiseRng) -> Option<EconomyAction> {
        let noise_factor = if self.stochastic { lognormal_factor(self.sigma, rng) } else { 1.0 };
        Some(EconomyAction::UpdatePrice { noise_factor })
    }
}

/// Daily policies in block order. Without the behavioral layer only the pool
/// release and the price update run.
pub fn economy_policies(
    params: &EconomyParams,
    decay_rate: f64,
    behavior: bool,
    noise: bool,
) -> Vec<Policy<EconomyAction>> {
    let mut policies = vec![Policy::new(POOL, DISBURSE, DailyRelease).observing(ObservationFilter::Keys(vec![]))];
    if behavior {
        policies.push(
            Policy::new(PLATFORM, ONBOARD, DeveloperInflow { params: params.clone(), decay_rate, stochastic: noise })
                .observing(ObservationFilter::Keys(vec![vars::POOL_XNS, vars::PRICE, vars::ARRIVAL_BACKLOG])),
        );
        policies.push(Policy::new(PLATFORM, GROW_USERS, Always(|| EconomyAction::GrowUsers)));
        policies.push(Policy::new(PLATFORM, SETTLE, Always(|| EconomyAction::Settle)));
    }
    policies.push(
        Policy::new(MARKET, UPDATE_PRICE, PriceOracle { sigma: params.demand_sigma, stochastic: noise })
            .observing(ObservationFilter::Keys(vec![])),
    );
    policies
}
