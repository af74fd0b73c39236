//! Experiment configuration (JSON, `schema_version` 1).
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "n": 200, "k": 10,
//!   "ratios": [0.1, 0.2, 0.3],
//!   "trials": 100,
//!   "base_seed": 20240501,
//!   "signal": { "model": "gaussian", "decay": 0.7, "target_norm": 1.0 },
//!   "algorithms": [
//!     { "algorithm": "gesp", "strategy": "known_structure", "variant": "theorem1" },
//!     { "algorithm": "gesp", "strategy": "fixed", "p": 3 },
//!     { "algorithm": "esp" },
//!     { "algorithm": "diag_two_step" },
//!     { "algorithm": "truncated_power", "tpm_iters": 50 }
//!   ],
//!   "threads": 4,
//!   "out_path": "results/gaussian.csv",
//!   "timing": false
//! }
//! ```

use std::path::{Path, PathBuf};

use gesp_core::baselines::{BaselineKind, DEFAULT_TPM_ITERS};
use gesp_core::gesp::PStrategy;
use gesp_core::numerics::PVariant;
use gesp_core::signal::{SignalModel, SignalModelSpec, DEFAULT_DECAY};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalSection {
    pub model: SignalModel,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_target_norm")]
    pub target_norm: f64,
}

fn default_decay() -> f64 {
    DEFAULT_DECAY
}

fn default_target_norm() -> f64 {
    1.0
}

fn default_tpm_iters() -> usize {
    DEFAULT_TPM_ITERS
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn default_out_path() -> PathBuf {
    PathBuf::from("results.csv")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    Fixed,
    KnownStructure,
    SqrtK,
    FullK,
    Ensemble,
}

/// One entry of the `algorithms` list as written in the file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    Gesp {
        strategy: StrategyName,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        p: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        variant: Option<PVariant>,
    },
    Esp {},
    DiagTwoStep {},
    TruncatedPower {
        #[serde(default = "default_tpm_iters")]
        tpm_iters: usize,
    },
}

/// A validated algorithm ready to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Gesp(PStrategy),
    Baseline(BaselineKind),
}

impl Algorithm {
    /// Value of the `algorithm` column.
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Gesp(_) => "gesp",
            Algorithm::Baseline(b) => b.as_str(),
        }
    }

    /// Value of the `strategy` column; baselines have none.
    pub fn strategy(&self) -> &'static str {
        match self {
            Algorithm::Gesp(s) => s.as_str(),
            Algorithm::Baseline(_) => "none",
        }
    }
}

impl AlgorithmSpec {
    pub fn resolve(&self, k: usize) -> Result<Algorithm> {
        match *self {
            AlgorithmSpec::Gesp { strategy, p, variant } => {
                if p.is_some() && strategy != StrategyName::Fixed {
                    return Err(BenchError::config("`p` is only valid with strategy `fixed`"));
                }
                if variant.is_some() && strategy != StrategyName::KnownStructure {
                    return Err(BenchError::config(
                        "`variant` is only valid with strategy `known_structure`",
                    ));
                }
                let s = match strategy {
                    StrategyName::Fixed => {
                        let p = p.ok_or_else(|| BenchError::config("strategy `fixed` needs `p`"))?;
                        if p == 0 || p > k {
                            return Err(BenchError::config(format!("fixed p = {p} outside [1, {k}]")));
                        }
                        PStrategy::Fixed(p)
                    }
                    StrategyName::KnownStructure => {
                        PStrategy::KnownStructure(variant.unwrap_or(PVariant::Theorem1))
                    }
                    StrategyName::SqrtK => PStrategy::SqrtK,
                    StrategyName::FullK => PStrategy::FullK,
                    StrategyName::Ensemble => PStrategy::Ensemble,
                };
                Ok(Algorithm::Gesp(s))
            }
            AlgorithmSpec::Esp {} => Ok(Algorithm::Baseline(BaselineKind::Esp)),
            AlgorithmSpec::DiagTwoStep {} => Ok(Algorithm::Baseline(BaselineKind::DiagTwoStep)),
            AlgorithmSpec::TruncatedPower { tpm_iters } => {
                if tpm_iters == 0 {
                    return Err(BenchError::config("tpm_iters must be positive"));
                }
                Ok(Algorithm::Baseline(BaselineKind::TruncatedPower { iters: tpm_iters }))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    pub ratios: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub signal: SignalSection,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_threads")]
    pub threads: usize,
    #[serde(default = "default_out_path")]
    pub out_path: PathBuf,
    /// Record wall-clock runtimes. Off by default because timings make the
    /// CSV non-reproducible; `runtime_ms` is then 0.
    #[serde(default)]
    pub timing: bool,
}

/// One sampling ratio after rounding to a measurement count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub ratio: f64,
    pub m: usize,
}

/// A validated configuration, expanded into what the sweep iterates over.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub n: usize,
    pub k: usize,
    pub points: Vec<RatioPoint>,
    pub trials: usize,
    pub base_seed: u64,
    pub signal: SignalModelSpec,
    pub algorithms: Vec<Algorithm>,
    pub threads: usize,
    pub timing: bool,
}

impl BenchConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| BenchError::config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            BenchError::config(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json_str(&text).map_err(|e| match e {
            BenchError::Config(msg) => BenchError::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn signal_spec(&self) -> SignalModelSpec {
        SignalModelSpec::new(self.signal.model, self.n, self.k)
            .with_decay(self.signal.decay)
            .with_target_norm(self.signal.target_norm)
    }

    /// Resolved `(ratio, m)` points. Ratios that round to an `m` already seen
    /// are dropped; the first occurrence wins.
    pub fn ratio_points(&self) -> Result<Vec<RatioPoint>> {
        let mut out: Vec<RatioPoint> = Vec::with_capacity(self.ratios.len());
        for &r in &self.ratios {
            if !(r > 0.0 && r <= 2.0) {
                return Err(BenchError::config(format!("ratio {r} outside (0, 2]")));
            }
            let m = (r * self.n as f64).round() as usize;
            if m == 0 {
                return Err(BenchError::config(format!("ratio {r} gives m = 0 at n = {}", self.n)));
            }
            if out.iter().all(|pt| pt.m != m) {
                out.push(RatioPoint { ratio: r, m });
            }
        }
        Ok(out)
    }

    pub fn plan(&self) -> Result<Plan> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(BenchError::config(format!(
                "schema_version {} not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.n == 0 || self.k == 0 || self.k > self.n {
            return Err(BenchError::config(format!(
                "need 1 <= k <= n, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        if self.trials == 0 {
            return Err(BenchError::config("trials must be positive"));
        }
        if self.threads == 0 {
            return Err(BenchError::config("threads must be positive"));
        }
        if self.ratios.is_empty() {
            return Err(BenchError::config("ratios must not be empty"));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::config("algorithms must not be empty"));
        }
        let signal = self.signal_spec();
        signal.validate().map_err(|e| BenchError::config(e.to_string()))?;
        let mut algorithms = Vec::with_capacity(self.algorithms.len());
        for spec in &self.algorithms {
            let a = spec.resolve(self.k)?;
            if algorithms
                .iter()
                .any(|b: &Algorithm| b.name() == a.name() && b.strategy() == a.strategy())
            {
                return Err(BenchError::config(format!(
                    "duplicate algorithm entry {} / {}",
                    a.name(),
                    a.strategy()
                )));
            }
            algorithms.push(a);
        }
        Ok(Plan {
            n: self.n,
            k: self.k,
            points: self.ratio_points()?,
            trials: self.trials,
            base_seed: self.base_seed,
            signal,
            algorithms,
            threads: self.threads,
            timing: self.timing,
        })
    }
}
