//! `tokensim`: run subsidy-pool scenarios and sweeps, write CSVs and charts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tokensim::io::{self, ChartSeries, RunId, Variable};
use tokensim::montecarlo::{aggregate_mean, run_scenario, Parallelism, Preset, RunResult, ScenarioConfig};

#[derive(Parser)]
#[command(name = "tokensim", version, about = "Monte Carlo simulator for a token economy's developer subsidy pool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every Monte Carlo trajectory of one scenario.
    Simulate {
        /// Scenario document (TOML).
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a preset grid or a list of scenario documents.
    Sweep {
        #[arg(long, conflicts_with = "configs", required_unless_present = "configs")]
        preset: Option<Preset>,
        #[arg(long, num_args = 1..)]
        configs: Vec<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Chart one variable from CSV files written by `simulate` or `sweep`.
    Plot {
        #[arg(long = "in", num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
        /// pool_balance_xns, cum_subsidy_xns, cum_subsidy_usd, price_usd, treasury_xns or treasury_usd.
        #[arg(long)]
        var: String,
        /// Destination SVG file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a scenario document without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Master seed; overrides the document's.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "TOKENSIM_OUT", default_value = "results")]
    out: PathBuf,
    /// Use expected values instead of random draws.
    #[arg(long)]
    no_noise: bool,
    /// Send platform fees to the treasury instead of the pool.
    #[arg(long)]
    no_replenish: bool,
    /// Disable developer, user and fee dynamics.
    #[arg(long)]
    no_behavior: bool,
    /// Worker threads (1 runs serially). Defaults to all cores.
    #[arg(long)]
    jobs: Option<usize>,
}

impl RunArgs {
    fn apply(&self, mut config: ScenarioConfig) -> ScenarioConfig {
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        config.toggles.noise &= !self.no_noise;
        config.toggles.replenish &= !self.no_replenish;
        config.toggles.behavior &= !self.no_behavior;
        config
    }

    fn parallelism(&self) -> Parallelism {
        match self.jobs {
            None | Some(0) => Parallelism::Auto,
            Some(1) => Parallelism::Serial,
            Some(n) => Parallelism::Threads(n),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, run } => {
            let scenario = run.apply(io::load_scenario_config(&config)?);
            let prefix = file_stem(&config);
            let series = run_and_write(&scenario, &prefix, &run)?;
            write_charts(&[series], &prefix, &run.out)
        }
        Command::Sweep { preset, configs, run } => {
            let (prefix, scenarios) = match preset {
                Some(p) => (p.name().to_owned(), p.configs(tokensim::montecarlo::DEFAULT_MASTER_SEED)),
                None => {
                    let loaded = configs.iter().map(|p| io::load_scenario_config(p)).collect::<Result<Vec<_>, _>>()?;
                    ("sweep".to_owned(), loaded)
                }
            };
            let mut series = Vec::new();
            let mut failed = 0;
            for scenario in scenarios {
                match run_and_write(&run.apply(scenario), &prefix, &run) {
                    Ok(s) => series.push(s),
                    Err(e) => {
                        eprintln!("error: {e:#}");
                        failed += 1;
                    }
                }
            }
            if !series.is_empty() {
                write_charts(&series, &prefix, &run.out)?;
            }
            if failed > 0 {
                bail!("{failed} scenario(s) failed");
            }
            Ok(())
        }
        Command::Plot { inputs, var, out } => plot(&inputs, &var, &out),
        Command::Validate { config } => {
            let c = io::load_scenario_config(&config)?;
            println!(
                "{}: ok (initial pool {} XNS, decay {}/day, {} days, {} runs, seed {})",
                config.display(),
                c.initial_pool_xns,
                c.decay_rate_per_day,
                c.timesteps,
                c.runs,
                c.master_seed
            );
            Ok(())
        }
    }
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "scenario".into(), |s| s.to_string_lossy().into_owned())
}

fn legend(initial_pool: f64) -> String {
    format!("A₀ = {}×10⁶ XNS", initial_pool / 1e6)
}

/// Runs one scenario and writes `<prefix>_<A0>_<lambda>.csv` (every run),
/// `…_mean.csv` and `envelopes/…_envelope.csv` (per-day min and max).
fn run_and_write(config: &ScenarioConfig, prefix: &str, args: &RunArgs) -> Result<ChartSeries> {
    let started = Instant::now();
    let runs = run_scenario(config, args.parallelism()).with_context(|| format!("scenario {}", config.label()))?;
    let agg = aggregate_mean(&runs)?;
    log::info!(
        "{prefix} {}: {} runs × {} days in {:.1?}",
        config.label(),
        runs.len(),
        config.timesteps,
        started.elapsed()
    );

    let envelopes = args.out.join("envelopes");
    fs::create_dir_all(&envelopes).with_context(|| format!("creating {}", envelopes.display()))?;
    let base = format!("{prefix}_{}", config.label());
    io::write_timeseries_csv(per_run(&runs), &args.out.join(format!("{base}.csv")))?;
    io::write_timeseries_csv([(RunId::Mean, &agg.mean[..])], &args.out.join(format!("{base}_mean.csv")))?;
    io::write_timeseries_csv(
        [(RunId::Min, &agg.min[..]), (RunId::Max, &agg.max[..])],
        &envelopes.join(format!("{base}_envelope.csv")),
    )?;
    Ok(ChartSeries::new(legend(config.initial_pool_xns), agg.mean))
}

fn per_run(runs: &[RunResult]) -> impl Iterator<Item = io::Series<'_>> {
    runs.iter().map(|r| (RunId::Run(r.run_id), &r.records[..]))
}

fn write_charts(series: &[ChartSeries], prefix: &str, out: &Path) -> Result<()> {
    for var in Variable::ALL {
        io::render_line_chart(series, var.name(), &out.join(format!("{prefix}_{}.svg", var.name())))?;
    }
    Ok(())
}

/// One line per input file: its `mean` rows if present, otherwise the mean
/// of its runs.
fn plot(inputs: &[PathBuf], var: &str, out: &Path) -> Result<()> {
    var.parse::<Variable>()?;
    let mut series = Vec::new();
    for path in inputs {
        let rows = io::read_timeseries_csv(path)?;
        let means: Vec<_> = rows.iter().filter(|(id, _)| *id == RunId::Mean).map(|(_, r)| *r).collect();
        let records = if !means.is_empty() {
            means
        } else {
            let mut runs: Vec<RunResult> = Vec::new();
            for (id, record) in rows {
                let RunId::Run(run_id) = id else { continue };
                match runs.last_mut() {
                    Some(r) if r.run_id == run_id => r.records.push(record),
                    _ => runs.push(RunResult { run_id, seed: 0, records: vec![record] }),
                }
            }
            aggregate_mean(&runs).with_context(|| format!("{}", path.display()))?.mean
        };
        series.push(ChartSeries::new(file_stem(path), records));
    }
    io::render_line_chart(&series, var, out)?;
    Ok(())
}
