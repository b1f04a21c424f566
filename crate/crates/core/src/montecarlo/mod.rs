//! Seeded Monte Carlo runs over economy scenarios.
//!
//! Run `r` of a scenario draws all of its randomness from
//! `derive_run_seed(master_seed, r)`, so a run's output does not depend on
//! how many other runs exist or on which thread executes it. Results are
//! always collected in run order, and serial and parallel execution produce
//! identical bits.

mod config;
mod mean;

use rayon::prelude::*;

use crate::economy::{build_economy, EconomyError, KpiRecord};
use crate::engine::EnvNoise;

pub use config::{Preset, ScenarioConfig, Toggles, DEFAULT_MASTER_SEED, DEFAULT_RUNS, DEFAULT_TIMESTEPS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Economy(#[from] EconomyError),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
    #[error("could not start worker threads: {0}")]
    Workers(String),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AggregateError {
    #[error("no runs to aggregate")]
    Empty,
    #[error("run {run_id} has {len} records, expected {expected}")]
    Ragged { run_id: u64, len: usize, expected: usize },
}

/// How runs are spread over threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    /// Rayon's global pool.
    #[default]
    Auto,
    Serial,
    Threads(usize),
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser; a bijection on `u64`.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run_id`: the `run_id + 1`-th SplitMix64 output of `master_seed`.
///
/// For a fixed master seed this is injective in `run_id` (an odd multiplier,
/// an addition and `mix64` are all bijections mod 2⁶⁴) and uses only
/// wrapping integer arithmetic, so it is identical on every platform.
pub fn derive_run_seed(master_seed: u64, run_id: u64) -> u64 {
    mix64(master_seed.wrapping_add(run_id.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub run_id: u64,
    pub seed: u64,
    /// One record per day, `t = 1..=timesteps`.
    pub records: Vec<KpiRecord>,
}

/// Per-day statistics across runs. `min` and `max` are envelopes on top of
/// the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateResult {
    pub runs: usize,
    pub mean: Vec<KpiRecord>,
    pub min: Vec<KpiRecord>,
    pub max: Vec<KpiRecord>,
}

/// Runs every Monte Carlo trajectory of a scenario, in run order.
pub fn run_scenario(config: &ScenarioConfig, parallelism: Parallelism) -> Result<Vec<RunResult>, ScenarioError> {
    config.validate().map_err(ScenarioError::InvalidConfig)?;
    let (genesis, economy) = build_economy(config)?;
    let run = |run_id: u64| {
        let seed = derive_run_seed(config.master_seed, run_id);
        let (_, records) = economy.run(genesis.clone(), &EnvNoise::new(seed), config.timesteps);
        RunResult { run_id, seed, records }
    };
    let ids = 0..config.runs;
    let results = match parallelism {
        Parallelism::Serial => ids.map(run).collect(),
        Parallelism::Auto => ids.into_par_iter().map(run).collect(),
        Parallelism::Threads(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| ScenarioError::Workers(e.to_string()))?
            .install(|| ids.into_par_iter().map(run).collect()),
    };
    Ok(results)
}

#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub config: ScenarioConfig,
    pub result: Result<AggregateResult, ScenarioError>,
}

/// Runs and aggregates each scenario. A failing scenario is reported in
/// its own entry and does not affect the others.
pub fn run_sweep(configs: &[ScenarioConfig], parallelism: Parallelism) -> Vec<SweepEntry> {
    configs
        .iter()
        .map(|config| SweepEntry {
            config: config.clone(),
            result: run_scenario(config, parallelism).and_then(|runs| Ok(aggregate_mean(&runs)?)),
        })
        .collect()
}

/// Element-wise mean, min and max of every KPI across runs.
///
/// Each mean is the exact average of the runs' values rounded once to the
/// nearest `f64`, so it does not depend on run order and equals the common
/// value when all runs agree.
pub fn aggregate_mean(results: &[RunResult]) -> Result<AggregateResult, AggregateError> {
    let first = results.first().ok_or(AggregateError::Empty)?;
    let len = first.records.len();
    if let Some(bad) = results.iter().find(|r| r.records.len() != len) {
        return Err(AggregateError::Ragged { run_id: bad.run_id, len: bad.records.len(), expected: len });
    }

    let n = results.len();
    let mut mean = Vec::with_capacity(len);
    let mut min = Vec::with_capacity(len);
    let mut max = Vec::with_capacity(len);
    let mut column = vec![0.0; n];
    for day in 0..len {
        let t = first.records[day].t;
        let mut lo = KpiRecord { t, ..Default::default() };
        let mut hi = lo;
        let mut avg = lo;
        for field in Field::ALL {
            for (slot, run) in column.iter_mut().zip(results) {
                *slot = field.get(&run.records[day]);
            }
            field.set(&mut lo, column.iter().copied().fold(f64::INFINITY, f64::min));
            field.set(&mut hi, column.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            field.set(&mut avg, mean::exact_mean(&column));
        }
        mean.push(avg);
        min.push(lo);
        max.push(hi);
    }
    Ok(AggregateResult { runs: n, mean, min, max })
}

#[derive(Clone, Copy)]
enum Field {
    Pool,
    CumXns,
    CumUsd,
    Price,
    Treasury,
    TreasuryUsd,
    Developers,
    Users,
    Fees,
    Replenished,
}

impl Field {
    const ALL: [Field; 10] = [
        Field::Pool,
        Field::CumXns,
        Field::CumUsd,
        Field::Price,
        Field::Treasury,
        Field::TreasuryUsd,
        Field::Developers,
        Field::Users,
        Field::Fees,
        Field::Replenished,
    ];

    fn slot(self, r: &mut KpiRecord) -> &mut f64 {
        match self {
            Field::Pool => &mut r.pool_balance_xns,
            Field::CumXns => &mut r.cum_subsidy_xns,
            Field::CumUsd => &mut r.cum_subsidy_usd,
            Field::Price => &mut r.price_usd,
            Field::Treasury => &mut r.treasury_xns,
            Field::TreasuryUsd => &mut r.treasury_usd,
            Field::Developers => &mut r.n_developers,
            Field::Users => &mut r.n_users,
            Field::Fees => &mut r.fees_usd,
            Field::Replenished => &mut r.cum_replenished_xns,
        }
    }

    fn get(self, r: &KpiRecord) -> f64 {
        let mut copy = *r;
        *self.slot(&mut copy)
    }

    fn set(self, r: &mut KpiRecord, value: f64) {
        *self.slot(r) = value;
    }
}

#[cfg(test)]
mod tests;
