use super::EconomyError;

/// Knobs of the token-flow and behavioral model.
///
/// Only the fixed supply and the platform fee rate come from the modelled
/// network's design; the adoption and price parameters drive a documented
/// stand-in behavioral model and have no published calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct EconomyParams {
    /// Fixed XNS supply.
    pub total_supply_xns: f64,
    /// Annual turnover of circulating tokens in the price model.
    pub velocity_per_year: f64,
    /// Share of resource fees taken as platform fees (τ).
    pub platform_fee_rate: f64,
    pub fee_per_user_usd_day: f64,
    /// Developer arrivals per day with no subsidy.
    pub dev_arrival_base_rate: f64,
    /// How strongly the USD value of the daily subsidy lifts arrivals (α).
    pub dev_attractiveness_coeff: f64,
    /// Daily subsidy value (USD) that lifts the arrival rate by α times the base rate.
    pub subsidy_usd_scale: f64,
    /// New users per deployed app per day while far from saturation.
    pub user_growth_rate: f64,
    pub user_carrying_capacity: f64,
    /// Volatility of the multiplicative daily price noise.
    pub demand_sigma: f64,
    pub price_floor_usd: f64,
    /// Weight of the newest day in the demand moving average.
    pub demand_ema_alpha: f64,
}

impl Default for EconomyParams {
    fn default() -> Self {
        Self {
            total_supply_xns: 1e9,
            velocity_per_year: 20.0,
            platform_fee_rate: 0.2,
            fee_per_user_usd_day: 0.05,
            dev_arrival_base_rate: 0.05,
            dev_attractiveness_coeff: 1.0,
            subsidy_usd_scale: 10_000.0,
            user_growth_rate: 2.0,
            user_carrying_capacity: 1e6,
            demand_sigma: 0.05,
            price_floor_usd: 0.001,
            demand_ema_alpha: 0.05,
        }
    }
}

impl EconomyParams {
    pub fn validate(&self) -> Result<(), EconomyError> {
        let positive = [
            ("total_supply_xns", self.total_supply_xns),
            ("velocity_per_year", self.velocity_per_year),
            ("subsidy_usd_scale", self.subsidy_usd_scale),
            ("user_carrying_capacity", self.user_carrying_capacity),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(EconomyError::InvalidInput(format!("economy.{name} must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("fee_per_user_usd_day", self.fee_per_user_usd_day),
            ("dev_arrival_base_rate", self.dev_arrival_base_rate),
            ("dev_attractiveness_coeff", self.dev_attractiveness_coeff),
            ("user_growth_rate", self.user_growth_rate),
            ("demand_sigma", self.demand_sigma),
            ("price_floor_usd", self.price_floor_usd),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(EconomyError::InvalidInput(format!("economy.{name} must be non-negative, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.platform_fee_rate) {
            return Err(EconomyError::InvalidInput(format!(
                "economy.platform_fee_rate must lie in [0, 1], got {}",
                self.platform_fee_rate
            )));
        }
        if !(self.demand_ema_alpha > 0.0 && self.demand_ema_alpha <= 1.0) {
            return Err(EconomyError::InvalidInput(format!(
                "economy.demand_ema_alpha must lie in (0, 1], got {}",
                self.demand_ema_alpha
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        EconomyParams::default().validate().unwrap();
    }

    #[test]
    fn out_of_range_fields_are_named() {
        let p = EconomyParams { platform_fee_rate: 1.5, ..Default::default() };
        assert!(p.validate().unwrap_err().to_string().contains("platform_fee_rate"));
        let p = EconomyParams { demand_ema_alpha: 0.0, ..Default::default() };
        assert!(p.validate().unwrap_err().to_string().contains("demand_ema_alpha"));
        let p = EconomyParams { velocity_per_year: -1.0, ..Default::default() };
        assert!(p.validate().unwrap_err().to_string().contains("velocity_per_year"));
    }
}
