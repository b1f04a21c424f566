//! Scenario documents, CSV time series and SVG charts.

mod chart;
mod config;
mod timeseries;

use std::path::{Path, PathBuf};

pub use chart::{line_chart_svg, render_line_chart, ChartSeries, Variable};
pub use config::{parse_scenario_config, ConfigError};
pub use timeseries::{
    read_timeseries, read_timeseries_csv, write_timeseries, write_timeseries_csv, RunId, Series, COLUMNS,
};

use crate::montecarlo::ScenarioConfig;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: std::io::Error },
    #[error("write failed: {0}")]
    Write(std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Format(String),
    #[error("{}: {inner}", path.display())]
    At { path: PathBuf, inner: Box<IoError> },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown variable `{0}` (expected one of {list})", list = Variable::names().join(", "))]
    UnknownVariable(String),
    #[error("nothing to plot")]
    EmptyChart,
}

impl IoError {
    fn file(path: &Path, source: std::io::Error) -> Self {
        IoError::File { path: path.to_owned(), source }
    }

    fn at(self, path: &Path) -> Self {
        match self {
            e @ (IoError::File { .. } | IoError::At { .. }) => e,
            e => IoError::At { path: path.to_owned(), inner: Box::new(e) },
        }
    }
}

/// Reads and parses a scenario document from disk.
pub fn load_scenario_config(path: &Path) -> Result<ScenarioConfig, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::file(path, e))?;
    parse_scenario_config(&text).map_err(|e| IoError::Config(e).at(path))
}
