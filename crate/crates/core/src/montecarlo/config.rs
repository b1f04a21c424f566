use std::fmt;
use std::str::FromStr;

use crate::economy::EconomyParams;

/// Switches that isolate parts of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Toggles {
    /// Platform fees flow back into the pool (otherwise to the treasury).
    pub replenish: bool,
    /// Stochastic arrivals and price noise (otherwise their expectations).
    pub noise: bool,
    /// Developer, user and fee dynamics (otherwise only the pool runs).
    pub behavior: bool,
}

impl Default for Toggles {
    fn default() -> Self {
        Self { replenish: true, noise: true, behavior: true }
    }
}

impl Toggles {
    /// Pure pool decay: no replenishment, no noise, no behavior.
    pub fn decay_only() -> Self {
        Self { replenish: false, noise: false, behavior: false }
    }
}

pub const DEFAULT_TIMESTEPS: u64 = 3652;
pub const DEFAULT_RUNS: u64 = 100;
pub const DEFAULT_MASTER_SEED: u64 = 2019;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// A₀, XNS.
    pub initial_pool_xns: f64,
    /// λ, per day.
    pub decay_rate_per_day: f64,
    /// Days simulated.
    pub timesteps: u64,
    pub runs: u64,
    pub master_seed: u64,
    pub economy: EconomyParams,
    pub toggles: Toggles,
}

impl ScenarioConfig {
    pub fn new(initial_pool_xns: f64, decay_rate_per_day: f64) -> Self {
        Self {
            initial_pool_xns,
            decay_rate_per_day,
            timesteps: DEFAULT_TIMESTEPS,
            runs: DEFAULT_RUNS,
            master_seed: DEFAULT_MASTER_SEED,
            economy: EconomyParams::default(),
            toggles: Toggles::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_toggles(mut self, toggles: Toggles) -> Self {
        self.toggles = toggles;
        self
    }

    pub fn with_runs(mut self, runs: u64) -> Self {
        self.runs = runs;
        self
    }

    pub fn with_timesteps(mut self, timesteps: u64) -> Self {
        self.timesteps = timesteps;
        self
    }

    /// `<A0>_<lambda>`, used in output file names.
    pub fn label(&self) -> String {
        format!("{}_{}", self.initial_pool_xns, self.decay_rate_per_day)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.timesteps < 1 {
            return Err("scenario.timesteps must be at least 1".into());
        }
        if self.runs < 1 {
            return Err("scenario.runs must be at least 1".into());
        }
        if !(self.initial_pool_xns >= 0.0 && self.initial_pool_xns.is_finite()) {
            return Err(format!("scenario.initial_pool_xns must be non-negative, got {}", self.initial_pool_xns));
        }
        if !(self.decay_rate_per_day > 0.0 && self.decay_rate_per_day.is_finite()) {
            return Err(format!("scenario.decay_rate_per_day must be positive, got {}", self.decay_rate_per_day));
        }
        self.economy.validate().map_err(|e| e.to_string())?;
        if self.initial_pool_xns > self.economy.total_supply_xns {
            return Err(format!(
                "scenario.initial_pool_xns ({}) exceeds economy.total_supply_xns ({})",
                self.initial_pool_xns, self.economy.total_supply_xns
            ));
        }
        Ok(())
    }
}

/// The two published experiment grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Long-tail release: λ = 0.0005/day, four pool sizes.
    Table1,
    /// Front-loaded release: λ = 0.01/day, six pool sizes.
    Table2,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1 => "table1",
            Preset::Table2 => "table2",
        }
    }

    pub fn decay_rate(self) -> f64 {
        match self {
            Preset::Table1 => 0.0005,
            Preset::Table2 => 0.01,
        }
    }

    pub fn initial_pools(self) -> &'static [f64] {
        match self {
            Preset::Table1 => &[250e6, 500e6, 750e6, 1000e6],
            Preset::Table2 => &[10e6, 50e6, 250e6, 500e6, 750e6, 1000e6],
        }
    }

    /// 3652 daily steps and 100 runs per scenario.
    pub fn configs(self, master_seed: u64) -> Vec<ScenarioConfig> {
        self.initial_pools()
            .iter()
            .map(|&a0| ScenarioConfig::new(a0, self.decay_rate()).with_seed(master_seed))
            .collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table1" => Ok(Preset::Table1),
            "table2" => Ok(Preset::Table2),
            other => Err(format!("unknown preset `{other}` (expected table1 or table2)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_one_grid() {
        let c = Preset::Table1.configs(1);
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|c| c.decay_rate_per_day == 0.0005 && c.timesteps == 3652 && c.runs == 100));
        assert_eq!(c.iter().map(|c| c.initial_pool_xns).collect::<Vec<_>>(), vec![250e6, 500e6, 750e6, 1000e6]);
    }

    #[test]
    fn table_two_grid() {
        let c = Preset::Table2.configs(1);
        assert_eq!(c.len(), 6);
        assert!(c.iter().all(|c| c.decay_rate_per_day == 0.01 && c.timesteps == 3652 && c.runs == 100));
        assert_eq!(c[0].initial_pool_xns, 10e6);
        assert_eq!(c[5].initial_pool_xns, 1000e6);
    }

    #[test]
    fn labels_are_plain_numbers() {
        assert_eq!(ScenarioConfig::new(250e6, 0.0005).label(), "250000000_0.0005");
        assert_eq!(ScenarioConfig::new(1000e6, 0.01).label(), "1000000000_0.01");
    }

    #[test]
    fn validation_guards() {
        assert!(ScenarioConfig::new(250e6, 0.0).validate().is_err());
        assert!(ScenarioConfig::new(2e9, 0.01).validate().is_err());
        assert!(ScenarioConfig::new(1.0, 0.01).with_runs(0).validate().is_err());
        assert!(ScenarioConfig::new(1.0, 0.01).with_timesteps(0).validate().is_err());
        assert!(ScenarioConfig::new(0.0, 0.01).validate().is_ok());
    }

    #[test]
    fn preset_names_parse() {
        assert_eq!("table2".parse::<Preset>().unwrap(), Preset::Table2);
        assert!("table3".parse::<Preset>().is_err());
    }
}
