//! Monte Carlo benchmark harness for the sparse phase retrieval initializers
//! in `gesp-core`.
//!
//! A [`config::BenchConfig`] names a signal model, a grid of sampling ratios
//! `m / n`, a trial count and the algorithms to compare. [`sweep::run_sweep`]
//! draws one signal and one measurement set per (ratio, trial) cell, runs
//! every algorithm on that same instance and returns one
//! [`sweep::TrialRecord`] per algorithm. Each cell's random stream is seeded
//! from its indices alone, so results do not depend on the thread count.

pub mod aggregate;
pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod seed;
pub mod sweep;

pub use error::{BenchError, Result};
