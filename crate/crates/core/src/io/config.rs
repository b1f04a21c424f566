//! TOML scenario documents.
//!
//! ```toml
//! [scenario]
//! initial_pool_xns = 250e6
//! decay_rate_per_day = 0.0005
//! # timesteps = 3652, runs = 100, master_seed = 2019
//! # replenish = true, noise = true, behavior = true
//!
//! [economy]
//! platform_fee_rate = 0.2
//! ```

use toml::{Table, Value};

use crate::economy::EconomyParams;
use crate::montecarlo::ScenarioConfig;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("`{key}` must be {expected}")]
    TypeMismatch { key: String, expected: &'static str },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

const REQUIRED: [&str; 2] = ["scenario.initial_pool_xns", "scenario.decay_rate_per_day"];

/// Parses a scenario document, filling absent keys with defaults.
pub fn parse_scenario_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
    let mut config = ScenarioConfig::new(f64::NAN, f64::NAN);
    let mut seen = Vec::new();

    for (section, value) in &doc {
        let table = match (section.as_str(), value) {
            ("scenario" | "economy", Value::Table(t)) => t,
            ("scenario" | "economy", _) => {
                return Err(ConfigError::TypeMismatch { key: section.clone(), expected: "a table" })
            }
            _ => return Err(ConfigError::UnknownKey(section.clone())),
        };
        for (name, value) in table {
            let path = format!("{section}.{name}");
            if section == "scenario" {
                set_scenario(&mut config, name, value, &path)?;
            } else {
                set_economy(&mut config.economy, name, value, &path)?;
            }
            seen.push(path);
        }
    }

    if let Some(missing) = REQUIRED.into_iter().find(|k| !seen.iter().any(|s| s == k)) {
        return Err(ConfigError::Missing(missing));
    }
    config.validate().map_err(ConfigError::Invalid)?;
    Ok(config)
}

fn set_scenario(c: &mut ScenarioConfig, name: &str, v: &Value, path: &str) -> Result<(), ConfigError> {
    match name {
        "initial_pool_xns" => c.initial_pool_xns = float(v, path)?,
        "decay_rate_per_day" => c.decay_rate_per_day = float(v, path)?,
        "timesteps" => c.timesteps = count(v, path)?,
        "runs" => c.runs = count(v, path)?,
        "master_seed" => c.master_seed = count(v, path)?,
        "replenish" => c.toggles.replenish = flag(v, path)?,
        "noise" => c.toggles.noise = flag(v, path)?,
        "behavior" => c.toggles.behavior = flag(v, path)?,
        _ => return Err(ConfigError::UnknownKey(path.to_owned())),
    }
    Ok(())
}

fn set_economy(p: &mut EconomyParams, name: &str, v: &Value, path: &str) -> Result<(), ConfigError> {
    let slot = match name {
        "total_supply_xns" => &mut p.total_supply_xns,
        "velocity_per_year" => &mut p.velocity_per_year,
        "platform_fee_rate" => &mut p.platform_fee_rate,
        "fee_per_user_usd_day" => &mut p.fee_per_user_usd_day,
        "dev_arrival_base_rate" => &mut p.dev_arrival_base_rate,
        "dev_attractiveness_coeff" => &mut p.dev_attractiveness_coeff,
        "subsidy_usd_scale" => &mut p.subsidy_usd_scale,
        "user_growth_rate" => &mut p.user_growth_rate,
        "user_carrying_capacity" => &mut p.user_carrying_capacity,
        "demand_sigma" => &mut p.demand_sigma,
        "price_floor_usd" => &mut p.price_floor_usd,
        "demand_ema_alpha" => &mut p.demand_ema_alpha,
        _ => return Err(ConfigError::UnknownKey(path.to_owned())),
    };
    *slot = float(v, path)?;
    Ok(())
}

fn float(v: &Value, path: &str) -> Result<f64, ConfigError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(ConfigError::TypeMismatch { key: path.to_owned(), expected: "a number" }),
    }
}

fn count(v: &Value, path: &str) -> Result<u64, ConfigError> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as u64),
        _ => Err(ConfigError::TypeMismatch { key: path.to_owned(), expected: "a non-negative integer" }),
    }
}

fn flag(v: &Value, path: &str) -> Result<bool, ConfigError> {
    v.as_bool().ok_or_else(|| ConfigError::TypeMismatch { key: path.to_owned(), expected: "true or false" })
}
