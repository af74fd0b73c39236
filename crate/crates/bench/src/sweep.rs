//! Monte Carlo execution.

use std::time::Instant;

use gesp_core::baselines::run_baseline;
use gesp_core::gesp::{gesp, InitEstimate};
use gesp_core::measurement::{measure, sample_sensing, MeasurementSet};
use gesp_core::numerics::{raw_relative_error, relative_error};
use gesp_core::signal::{generate, SparseSignal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{Algorithm, BenchConfig, Plan};
use crate::error::{BenchError, Result};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub signal_model: String,
    pub algorithm: String,
    pub strategy: String,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub ratio: f64,
    pub trial_index: usize,
    pub seed: u64,
    pub p_used: usize,
    /// Phase-aligned `dist(z, x) / ||x||`.
    pub relative_error: f64,
    /// Unaligned `||z - x|| / ||x||`.
    pub raw_error: f64,
    /// `|S1 ∩ supp(x)| / k`.
    pub support_fraction: f64,
    pub runtime_ms: f64,
    pub error_flag: bool,
}

/// The signal and measurements of one trial. Every algorithm sees the same
/// instance.
#[derive(Debug, Clone)]
pub struct TrialInstance {
    pub seed: u64,
    pub signal: SparseSignal,
    pub meas: MeasurementSet,
}

pub fn trial_instance(plan: &Plan, ratio_idx: usize, trial_idx: usize) -> Result<TrialInstance> {
    let seed = derive_seed(plan.base_seed, ratio_idx, trial_idx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signal = generate(&plan.signal, &mut rng)?;
    let sensing = sample_sensing(plan.n, plan.points[ratio_idx].m, &mut rng)?;
    let meas = measure(&signal, sensing)?;
    Ok(TrialInstance { seed, signal, meas })
}

pub fn run_algorithm(alg: Algorithm, inst: &TrialInstance, k: usize) -> gesp_core::Result<InitEstimate> {
    match alg {
        Algorithm::Gesp(strategy) => gesp(&inst.meas, k, strategy, Some(&inst.signal.profile)),
        Algorithm::Baseline(kind) => run_baseline(&inst.meas, k, kind),
    }
}

fn record(plan: &Plan, ratio_idx: usize, trial_idx: usize, seed: u64, alg: Algorithm) -> TrialRecord {
    let pt = plan.points[ratio_idx];
    TrialRecord {
        signal_model: plan.signal.model.as_str().to_string(),
        algorithm: alg.name().to_string(),
        strategy: alg.strategy().to_string(),
        n: plan.n,
        k: plan.k,
        m: pt.m,
        ratio: pt.ratio,
        trial_index: trial_idx,
        seed,
        p_used: 0,
        relative_error: f64::NAN,
        raw_error: f64::NAN,
        support_fraction: f64::NAN,
        runtime_ms: 0.0,
        error_flag: true,
    }
}

/// All records of one (ratio, trial) cell, in configured algorithm order.
/// Failures become flagged records instead of aborting the sweep.
pub fn run_trial(plan: &Plan, ratio_idx: usize, trial_idx: usize) -> Vec<TrialRecord> {
    let seed = derive_seed(plan.base_seed, ratio_idx, trial_idx);
    let inst = match trial_instance(plan, ratio_idx, trial_idx) {
        Ok(inst) => inst,
        Err(_) => {
            return plan
                .algorithms
                .iter()
                .map(|&a| record(plan, ratio_idx, trial_idx, seed, a))
                .collect()
        }
    };
    let x = inst.signal.vector.as_slice();
    plan.algorithms
        .iter()
        .map(|&alg| {
            let mut rec = record(plan, ratio_idx, trial_idx, seed, alg);
            let start = plan.timing.then(Instant::now);
            let est = run_algorithm(alg, &inst, plan.k);
            if let Some(t) = start {
                rec.runtime_ms = t.elapsed().as_secs_f64() * 1e3;
            }
            let metrics = est.and_then(|e| {
                Ok((
                    e.p_used,
                    relative_error(&e.z, x)?,
                    raw_relative_error(&e.z, x)?,
                    e.support.intersection_len(&inst.signal.support) as f64 / plan.k as f64,
                ))
            });
            if let Ok((p, rel, raw, frac)) = metrics {
                rec.p_used = p;
                rec.relative_error = rel;
                rec.raw_error = raw;
                rec.support_fraction = frac;
                rec.error_flag = false;
            }
            rec
        })
        .collect()
}

/// Runs every (ratio, trial) cell on a pool of `plan.threads` workers.
/// Records come back ordered by (ratio index, trial index, algorithm order)
/// regardless of scheduling.
pub fn run_plan(plan: &Plan) -> Result<Vec<TrialRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.threads)
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    let cells = plan.points.len() * plan.trials;
    let per_cell: Vec<Vec<TrialRecord>> = pool.install(|| {
        (0..cells)
            .into_par_iter()
            .map(|c| run_trial(plan, c / plan.trials, c % plan.trials))
            .collect()
    });
    Ok(per_cell.into_iter().flatten().collect())
}

pub fn run_sweep(config: &BenchConfig) -> Result<Vec<TrialRecord>> {
    run_plan(&config.plan()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(trials: usize, threads: usize) -> BenchConfig {
        BenchConfig::from_json_str(&format!(
            r#"{{"schema_version": 1, "n": 30, "k": 3, "ratios": [0.5, 1.5], "trials": {trials},
                "base_seed": 5, "signal": {{"model": "binary"}}, "threads": {threads},
                "algorithms": [{{"algorithm": "gesp", "strategy": "full_k"}}, {{"algorithm": "diag_two_step"}}]}}"#
        ))
        .unwrap()
    }

    #[test]
    fn cardinality_and_order() {
        let recs = run_sweep(&config(3, 2)).unwrap();
        assert_eq!(recs.len(), 12);
        let keys: Vec<(usize, usize, &str)> =
            recs.iter().map(|r| (r.m, r.trial_index, r.algorithm.as_str())).collect();
        assert_eq!(keys[0], (15, 0, "gesp"));
        assert_eq!(keys[1], (15, 0, "diag_two_step"));
        assert_eq!(keys[2], (15, 1, "gesp"));
        assert_eq!(keys[11], (45, 2, "diag_two_step"));
    }

    #[test]
    fn paired_algorithms_share_seed_and_records_are_valid() {
        let recs = run_sweep(&config(4, 1)).unwrap();
        for pair in recs.chunks(2) {
            assert_eq!(pair[0].seed, pair[1].seed);
            assert_eq!(pair[0].trial_index, pair[1].trial_index);
        }
        for r in &recs {
            assert!(!r.error_flag);
            assert!((0.0..=1.0).contains(&r.support_fraction));
            assert!(r.relative_error >= 0.0 && r.raw_error >= r.relative_error - 1e-12);
            assert_eq!(r.runtime_ms, 0.0);
            if r.relative_error == 0.0 {
                assert_eq!(r.support_fraction, 1.0);
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_records() {
        let a = run_sweep(&config(5, 1)).unwrap();
        let b = run_sweep(&config(5, 4)).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.relative_error.to_bits(), y.relative_error.to_bits());
            assert_eq!(x, y);
        }
    }

    #[test]
    fn timing_fills_runtime() {
        let mut c = config(1, 1);
        c.timing = true;
        let recs = run_sweep(&c).unwrap();
        assert!(recs.iter().all(|r| r.runtime_ms > 0.0));
    }

    #[test]
    fn instance_is_a_function_of_indices() {
        let plan = config(3, 1).plan().unwrap();
        let a = trial_instance(&plan, 1, 2).unwrap();
        let b = trial_instance(&plan, 1, 2).unwrap();
        assert_eq!(a.meas, b.meas);
        assert_eq!(a.signal.vector, b.signal.vector);
        assert_eq!(a.meas.m(), 45);
    }
}
