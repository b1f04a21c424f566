//! Deterministic discrete-time simulation of a token economy with an
//! exponentially decaying, fee-replenished developer subsidy pool.
//!
//! * [`engine`] – generic ledger state-space machinery (state partition,
//!   mechanisms, transactions, policies, blocks, trajectories).
//! * [`economy`] – the subsidy economy built on the engine.
//! * [`montecarlo`] – seeded scenario runs, sweeps and cross-run means.
//! * [`io`] – scenario config documents, CSV time series and SVG charts.

// `!(x > 0.0)` style checks are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod economy;
pub mod engine;
pub mod io;
pub mod montecarlo;
