//! Per (algorithm, strategy, ratio) summary statistics.

use crate::sweep::TrialRecord;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (`n - 1` denominator); 0 for one value.
    pub sd: f64,
}

impl Stats {
    /// `NaN` statistics for an empty slice.
    pub fn of(values: &[f64]) -> Stats {
        if values.is_empty() {
            return Stats {
                mean: f64::NAN,
                median: f64::NAN,
                sd: f64::NAN,
            };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let h = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[h]
        } else {
            0.5 * (sorted[h - 1] + sorted[h])
        };
        Stats { mean, median, sd }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub algorithm: String,
    pub strategy: String,
    pub ratio: f64,
    pub m: usize,
    /// Records that completed; flagged records are excluded from the stats.
    pub count: usize,
    pub failures: usize,
    pub relative_error: Stats,
    pub support_fraction: Stats,
}

/// Groups records by (algorithm, strategy, ratio). Rows are ordered by the
/// first appearance of each (algorithm, strategy) pair, then by ascending
/// ratio.
pub fn aggregate(records: &[TrialRecord]) -> Vec<AggregateRow> {
    let mut labels: Vec<(&str, &str)> = Vec::new();
    for r in records {
        let key = (r.algorithm.as_str(), r.strategy.as_str());
        if !labels.contains(&key) {
            labels.push(key);
        }
    }
    let mut rows = Vec::new();
    for (alg, strat) in labels {
        let mut ratios: Vec<(f64, usize)> = Vec::new();
        for r in records.iter().filter(|r| r.algorithm == alg && r.strategy == strat) {
            if !ratios.iter().any(|&(x, _)| x.to_bits() == r.ratio.to_bits()) {
                ratios.push((r.ratio, r.m));
            }
        }
        ratios.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (ratio, m) in ratios {
            let group: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.algorithm == alg && r.strategy == strat && r.ratio.to_bits() == ratio.to_bits())
                .collect();
            let ok: Vec<&&TrialRecord> = group.iter().filter(|r| !r.error_flag).collect();
            let rel: Vec<f64> = ok.iter().map(|r| r.relative_error).collect();
            let sup: Vec<f64> = ok.iter().map(|r| r.support_fraction).collect();
            rows.push(AggregateRow {
                algorithm: alg.to_string(),
                strategy: strat.to_string(),
                ratio,
                m,
                count: ok.len(),
                failures: group.len() - ok.len(),
                relative_error: Stats::of(&rel),
                support_fraction: Stats::of(&sup),
            });
        }
    }
    rows
}
