//! CSV and plot-data writers. Floats carry 17 significant digits so values
//! round-trip exactly; lines end in `\n`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::aggregate::AggregateRow;
use crate::error::{BenchError, Result};
use crate::sweep::TrialRecord;

pub const RECORD_COLUMNS: [&str; 15] = [
    "signal_model",
    "algorithm",
    "strategy",
    "n",
    "k",
    "m",
    "ratio",
    "trial_index",
    "seed",
    "p_used",
    "relative_error",
    "raw_error",
    "support_fraction",
    "runtime_ms",
    "error_flag",
];

pub const SUMMARY_COLUMNS: [&str; 12] = [
    "algorithm",
    "strategy",
    "ratio",
    "m",
    "count",
    "failures",
    "mean_rel_err",
    "median_rel_err",
    "sd_rel_err",
    "mean_support_frac",
    "median_support_frac",
    "sd_support_frac",
];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_records<W: Write>(records: &[TrialRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "{}", RECORD_COLUMNS.join(","))?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.signal_model,
            r.algorithm,
            r.strategy,
            r.n,
            r.k,
            r.m,
            fmt_f64(r.ratio),
            r.trial_index,
            r.seed,
            r.p_used,
            fmt_f64(r.relative_error),
            fmt_f64(r.raw_error),
            fmt_f64(r.support_fraction),
            fmt_f64(r.runtime_ms),
            u8::from(r.error_flag),
        )?;
    }
    w.flush()
}

pub fn write_summary<W: Write>(rows: &[AggregateRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{}", SUMMARY_COLUMNS.join(","))?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.strategy,
            fmt_f64(r.ratio),
            r.m,
            r.count,
            r.failures,
            fmt_f64(r.relative_error.mean),
            fmt_f64(r.relative_error.median),
            fmt_f64(r.relative_error.sd),
            fmt_f64(r.support_fraction.mean),
            fmt_f64(r.support_fraction.median),
            fmt_f64(r.support_fraction.sd),
        )?;
    }
    w.flush()
}

/// One whitespace-separated block per (algorithm, strategy) with columns
/// `ratio mean_rel_err sd_rel_err mean_support_frac`, ratios ascending.
/// Blocks are separated by two blank lines so gnuplot's `index` can address
/// them; `#` lines name the block.
pub fn write_plot_data<W: Write>(rows: &[AggregateRow], mut w: W) -> io::Result<()> {
    let mut labels: Vec<(&str, &str)> = Vec::new();
    for r in rows {
        let key = (r.algorithm.as_str(), r.strategy.as_str());
        if !labels.contains(&key) {
            labels.push(key);
        }
    }
    for (i, (alg, strat)) in labels.iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
            writeln!(w)?;
        }
        writeln!(w, "# {alg} {strat}")?;
        writeln!(w, "# ratio mean_rel_err sd_rel_err mean_support_frac")?;
        let mut block: Vec<&AggregateRow> = rows
            .iter()
            .filter(|r| r.algorithm == *alg && r.strategy == *strat)
            .collect();
        block.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));
        for r in block {
            writeln!(
                w,
                "{} {} {} {}",
                fmt_f64(r.ratio),
                fmt_f64(r.relative_error.mean),
                fmt_f64(r.relative_error.sd),
                fmt_f64(r.support_fraction.mean),
            )?;
        }
    }
    w.flush()
}

/// Creates `path` (and missing parent directories) and streams `body` into
/// it. Rows written before an I/O failure are flushed where possible.
fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
{
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| BenchError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res = body(&mut w);
    let flushed = w.flush();
    res.and(flushed).map_err(|e| BenchError::io(path, e))
}

pub fn write_records_csv(records: &[TrialRecord], path: &Path) -> Result<()> {
    write_file(path, |w| write_records(records, w))
}

pub fn write_summary_csv(rows: &[AggregateRow], path: &Path) -> Result<()> {
    write_file(path, |w| write_summary(rows, w))
}

pub fn write_plot_file(rows: &[AggregateRow], path: &Path) -> Result<()> {
    write_file(path, |w| write_plot_data(rows, w))
}
