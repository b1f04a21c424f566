//! The developer subsidy pool: exponential release plus fee replenishment.

use super::EconomyError;

/// Pool balance after `t` days of pure decay: `A₀·e^(−λt)`.
pub fn analytic_pool_balance(initial: f64, decay_rate: f64, t: f64) -> Result<f64, EconomyError> {
    for (name, value) in [("initial pool", initial), ("decay rate", decay_rate), ("time", t)] {
        if !(value >= 0.0) {
            return Err(EconomyError::InvalidInput(format!("{name} must be non-negative, got {value}")));
        }
    }
    Ok(initial * (-decay_rate * t).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsidyPool {
    pub balance: f64,
    /// λ, per day.
    pub decay_rate: f64,
    pub replenish_enabled: bool,
    pub cumulative_disbursed: f64,
    pub cumulative_replenished: f64,
}

/// Where replenishing fees ended up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeeDestination {
    Pool,
    Treasury,
}

impl SubsidyPool {
    pub fn new(initial: f64, decay_rate: f64, replenish_enabled: bool) -> Self {
        Self { balance: initial, decay_rate, replenish_enabled, cumulative_disbursed: 0.0, cumulative_replenished: 0.0 }
    }

    /// Releases `balance·(1 − e^(−λ·dt))` and keeps `balance·e^(−λ·dt)`.
    ///
    /// The retained balance is computed first and the release is the exact
    /// difference, so `old = new + amount` holds in floating point whenever
    /// `e^(−λ·dt) ≥ ½`, and repeated daily steps track `A₀·e^(−λt)` to
    /// rounding error.
    pub fn disburse(&self, dt: f64) -> (f64, SubsidyPool) {
        let retained = self.balance * (-self.decay_rate * dt).exp();
        let amount = self.balance - retained;
        let next = SubsidyPool { balance: retained, cumulative_disbursed: self.cumulative_disbursed + amount, ..*self };
        (amount, next)
    }

    /// Routes collected platform fees into the pool, or to the treasury when
    /// replenishment is switched off. Only fees that reach the pool count as
    /// replenished.
    pub fn replenish(&self, fees: f64) -> Result<(SubsidyPool, FeeDestination), EconomyError> {
        if !(fees >= 0.0) {
            return Err(EconomyError::InvalidInput(format!("replenishing fees must be non-negative, got {fees}")));
        }
        if !self.replenish_enabled {
            return Ok((*self, FeeDestination::Treasury));
        }
        let next = SubsidyPool {
            balance: self.balance + fees,
            cumulative_replenished: self.cumulative_replenished + fees,
            ..*self
        };
        Ok((next, FeeDestination::Pool))
    }
}

/// `pool_disburse` as a free function.
pub fn pool_disburse(pool: &SubsidyPool, dt: f64) -> (f64, SubsidyPool) {
    pool.disburse(dt)
}

/// `pool_replenish` as a free function.
pub fn pool_replenish(pool: &SubsidyPool, fees: f64) -> Result<(SubsidyPool, FeeDestination), EconomyError> {
    pool.replenish(fees)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Expected values below were evaluated with 40-digit arithmetic.

    #[test]
    fn analytic_balance_table_one_horizon() {
        let v = analytic_pool_balance(250e6, 0.0005, 3652.0).unwrap();
        assert!(rel(v, 40_264_126.766_901_54) < 1e-12, "{v}");
    }

    #[test]
    fn analytic_balance_two_years_at_fast_decay() {
        let v = analytic_pool_balance(1000e6, 0.01, 730.0).unwrap();
        assert!(rel(v, 675_538.775_193_844_2) < 1e-12, "{v}");
        assert!(1.0 - v / 1000e6 > 0.9993);
    }

    #[test]
    fn analytic_balance_at_time_zero() {
        assert_eq!(analytic_pool_balance(123.456, 0.3, 0.0).unwrap(), 123.456);
    }

    #[test]
    fn analytic_balance_rejects_negative_inputs() {
        assert!(analytic_pool_balance(-1.0, 0.1, 1.0).is_err());
        assert!(analytic_pool_balance(1.0, -0.1, 1.0).is_err());
        assert!(analytic_pool_balance(1.0, 0.1, -1.0).is_err());
    }

    #[test]
    fn one_day_release() {
        let (amount, next) = SubsidyPool::new(1000.0, 0.01, true).disburse(1.0);
        assert!((amount - 9.950_166_250_831_946).abs() < 1e-12);
        assert!((next.balance - 990.049_833_749_168_1).abs() < 1e-12);
        assert_eq!(next.balance + amount, 1000.0);
        assert_eq!(next.cumulative_disbursed, amount);
    }

    #[test]
    fn empty_pool_releases_nothing() {
        let (amount, next) = SubsidyPool::new(0.0, 0.01, true).disburse(1.0);
        assert_eq!((amount, next.balance), (0.0, 0.0));
    }

    #[test]
    fn daily_steps_track_the_closed_form() {
        for &(a0, lambda) in &[(250e6, 0.0005), (1000e6, 0.0005), (10e6, 0.01), (1000e6, 0.01)] {
            let mut pool = SubsidyPool::new(a0, lambda, false);
            for t in 1..=3652 {
                pool = pool.disburse(1.0).1;
                let exact = analytic_pool_balance(a0, lambda, t as f64).unwrap();
                assert!(rel(pool.balance, exact) < 1e-9, "A0={a0} λ={lambda} t={t}");
            }
            assert!(rel(pool.cumulative_disbursed + pool.balance, a0) < 1e-12);
        }
    }

    #[test]
    fn replenish_routing() {
        let pool = SubsidyPool::new(100.0, 0.01, true);
        let (p, dest) = pool.replenish(20.0).unwrap();
        assert_eq!((p.balance, p.cumulative_replenished, dest), (120.0, 20.0, FeeDestination::Pool));

        let off = SubsidyPool::new(100.0, 0.01, false);
        let (p, dest) = off.replenish(20.0).unwrap();
        assert_eq!((p.balance, p.cumulative_replenished, dest), (100.0, 0.0, FeeDestination::Treasury));

        assert_eq!(pool.replenish(0.0).unwrap().0, pool);
        assert!(pool.replenish(-1.0).is_err());
    }
}
