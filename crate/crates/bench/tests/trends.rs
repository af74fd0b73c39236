//! Mean error should not grow with the sampling ratio.

use gesp_bench::aggregate::aggregate;
use gesp_bench::config::BenchConfig;
use gesp_bench::sweep::{run_sweep, TrialRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bootstrap_se(values: &[f64], rng: &mut ChaCha8Rng) -> f64 {
    let reps = 400;
    let means: Vec<f64> = (0..reps)
        .map(|_| (0..values.len()).map(|_| values[rng.random_range(0..values.len())]).sum::<f64>() / values.len() as f64)
        .collect();
    let mu = means.iter().sum::<f64>() / reps as f64;
    (means.iter().map(|m| (m - mu).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt()
}

#[test]
fn mean_error_non_increasing_in_ratio() {
    let cfg = BenchConfig::from_json_str(
        r#"{"schema_version": 1, "n": 200, "k": 10,
            "ratios": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
            "trials": 100, "base_seed": 77, "signal": {"model": "gaussian"},
            "algorithms": [{"algorithm": "gesp", "strategy": "known_structure"},
                           {"algorithm": "esp"}, {"algorithm": "diag_two_step"}]}"#,
    )
    .unwrap();
    let records = run_sweep(&cfg).unwrap();
    assert_eq!(records.len(), 3000);
    assert!(records.iter().all(|r| !r.error_flag));
    let rows = aggregate(&records);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let errors = |alg: &str, ratio: f64| -> Vec<f64> {
        records
            .iter()
            .filter(|r: &&TrialRecord| r.algorithm == alg && r.ratio == ratio)
            .map(|r| r.relative_error)
            .collect()
    };
    for alg in ["gesp", "esp", "diag_two_step"] {
        let series: Vec<_> = rows.iter().filter(|r| r.algorithm == alg).collect();
        assert_eq!(series.len(), 10);
        for w in series.windows(2) {
            let se = (bootstrap_se(&errors(alg, w[0].ratio), &mut rng).powi(2)
                + bootstrap_se(&errors(alg, w[1].ratio), &mut rng).powi(2))
            .sqrt();
            assert!(
                w[1].relative_error.mean <= w[0].relative_error.mean + se,
                "{alg}: {} at {} vs {} at {} (se {se})",
                w[1].relative_error.mean,
                w[1].ratio,
                w[0].relative_error.mean,
                w[0].ratio
            );
        }
    }
}
