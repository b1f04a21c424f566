//! KPI time series as CSV.
//!
//! Numbers are written in Rust's shortest round-trip form, so reading a file
//! back gives the exact in-memory values and identical inputs give
//! identical bytes.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::economy::KpiRecord;

use super::IoError;

pub const COLUMNS: [&str; 11] = [
    "run_id",
    "t",
    "pool_balance_xns",
    "cum_subsidy_xns",
    "cum_subsidy_usd",
    "price_usd",
    "treasury_xns",
    "treasury_usd",
    "n_developers",
    "n_users",
    "fees_usd",
];

/// The `run_id` column: a run number, or the name of a cross-run statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RunId {
    Run(u64),
    Mean,
    Min,
    Max,
}

impl fmt::Display for RunId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunId::Run(n) => write!(f, "{n}"),
            RunId::Mean => f.write_str("mean"),
            RunId::Min => f.write_str("min"),
            RunId::Max => f.write_str("max"),
        }
    }
}

impl FromStr for RunId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mean" => Ok(RunId::Mean),
            "min" => Ok(RunId::Min),
            "max" => Ok(RunId::Max),
            n => n.parse().map(RunId::Run).map_err(|_| format!("bad run_id `{s}`")),
        }
    }
}

/// One series per run; rows come out in the order given.
pub type Series<'a> = (RunId, &'a [KpiRecord]);

struct Counting<W> {
    inner: W,
    bytes: u64,
}

impl<W: Write> Write for Counting<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.bytes += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

/// Writes the header and one row per record. Returns the bytes written.
pub fn write_timeseries<'a, W: Write>(series: impl IntoIterator<Item = Series<'a>>, writer: W) -> Result<u64, IoError> {
    let mut out = csv::Writer::from_writer(Counting { inner: writer, bytes: 0 });
    out.write_record(COLUMNS)?;
    for (run, records) in series {
        let run = run.to_string();
        for r in records {
            out.write_record([
                run.clone(),
                r.t.to_string(),
                r.pool_balance_xns.to_string(),
                r.cum_subsidy_xns.to_string(),
                r.cum_subsidy_usd.to_string(),
                r.price_usd.to_string(),
                r.treasury_xns.to_string(),
                r.treasury_usd.to_string(),
                r.n_developers.to_string(),
                r.n_users.to_string(),
                r.fees_usd.to_string(),
            ])?;
        }
    }
    out.flush().map_err(IoError::Write)?;
    let counting = out.into_inner().map_err(|e| IoError::Write(e.into_error()))?;
    Ok(counting.bytes)
}

pub fn write_timeseries_csv<'a>(series: impl IntoIterator<Item = Series<'a>>, path: &Path) -> Result<u64, IoError> {
    let file = File::create(path).map_err(|e| IoError::file(path, e))?;
    write_timeseries(series, BufWriter::new(file)).map_err(|e| e.at(path))
}

/// Parses rows back, checking the header and every field.
pub fn read_timeseries<R: Read>(reader: R) -> Result<Vec<(RunId, KpiRecord)>, IoError> {
    let mut input = csv::Reader::from_reader(reader);
    let header = input.headers()?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(IoError::Format(format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows = Vec::new();
    for row in input.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |col: &str, v: &str| IoError::Format(format!("line {line}: bad {col} `{v}`"));
        let num = |i: usize| row[i].parse::<f64>().map_err(|_| bad(COLUMNS[i], &row[i]));
        let run = row[0].parse::<RunId>().map_err(|_| bad("run_id", &row[0]))?;
        let record = KpiRecord {
            t: row[1].parse().map_err(|_| bad("t", &row[1]))?,
            pool_balance_xns: num(2)?,
            cum_subsidy_xns: num(3)?,
            cum_subsidy_usd: num(4)?,
            price_usd: num(5)?,
            treasury_xns: num(6)?,
            treasury_usd: num(7)?,
            n_developers: num(8)?,
            n_users: num(9)?,
            fees_usd: num(10)?,
            cum_replenished_xns: 0.0,
        };
        rows.push((run, record));
    }
    Ok(rows)
}

pub fn read_timeseries_csv(path: &Path) -> Result<Vec<(RunId, KpiRecord)>, IoError> {
    let file = File::open(path).map_err(|e| IoError::file(path, e))?;
    read_timeseries(file).map_err(|e| e.at(path))
}
