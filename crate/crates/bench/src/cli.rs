//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use gesp_core::measurement::{measure, sample_sensing};
use gesp_core::numerics::{ceil_sqrt, dist, inner, p_objective, p_opt, structure_function, IndexSet, PVariant};
use gesp_core::signal::{generate, SignalModel, SignalModelSpec};
use gesp_core::spectrum::{expectation_oracle, frobenius_distance, SpectrumOperator, WeightingKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aggregate::aggregate;
use crate::config::{BenchConfig, Plan};
use crate::error::{BenchError, Result};
use crate::output::{write_plot_file, write_records_csv, write_summary_csv};
use crate::seed::derive_seed;
use crate::sweep::{run_algorithm, run_plan, trial_instance};

#[derive(Debug, Parser)]
#[command(name = "gesp-bench", version, about = "Sparse phase retrieval initializer benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the Monte Carlo sweep described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Records CSV path; overrides `out_path`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `base_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `threads`.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run one trial and report per-step diagnostics.
    Single {
        #[arg(long)]
        config: PathBuf,
        /// A sampling ratio present in the config.
        #[arg(long)]
        ratio: f64,
        #[arg(long)]
        trial: usize,
        #[arg(long)]
        verbose: bool,
    },
    /// Print the structure function and p objectives of the config's signal.
    Signal {
        #[arg(long)]
        config: PathBuf,
    },
    /// Report how fast the empirical spectrum approaches its expectation.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        seed: u64,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    let res = match cli.command {
        Command::Run {
            config,
            out: out_path,
            seed,
            threads,
        } => cmd_run(&config, out_path, seed, threads, out),
        Command::Single {
            config,
            ratio,
            trial,
            verbose,
        } => cmd_single(&config, ratio, trial, verbose, out),
        Command::Signal { config } => cmd_signal(&config, out),
        Command::Oracle { n, k, m, seed } => cmd_oracle(n, k, m, seed, out),
    };
    match res {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn stdout_err(e: std::io::Error) -> BenchError {
    BenchError::io("<stdout>", e)
}

/// `results/x.csv` -> `results/x_summary.csv` and `results/x.dat`.
pub fn sibling_paths(records: &Path) -> (PathBuf, PathBuf) {
    let stem = records
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".into());
    (
        records.with_file_name(format!("{stem}_summary.csv")),
        records.with_file_name(format!("{stem}.dat")),
    )
}

fn cmd_run(
    config: &Path,
    out_path: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
    out: &mut dyn Write,
) -> Result<()> {
    let mut cfg = BenchConfig::from_path(config)?;
    if let Some(p) = out_path {
        cfg.out_path = p;
    }
    if let Some(s) = seed {
        cfg.base_seed = s;
    }
    if let Some(t) = threads {
        cfg.threads = t;
    }
    let plan = cfg.plan()?;
    let records = run_plan(&plan)?;
    write_records_csv(&records, &cfg.out_path)?;
    let rows = aggregate(&records);
    let (summary, plot) = sibling_paths(&cfg.out_path);
    write_summary_csv(&rows, &summary)?;
    write_plot_file(&rows, &plot)?;

    writeln!(out, "{:<16} {:<16} {:>6} {:>6} {:>12} {:>12}", "algorithm", "strategy", "ratio", "m", "mean_rel_err", "support_frac")
        .map_err(stdout_err)?;
    for r in &rows {
        writeln!(
            out,
            "{:<16} {:<16} {:>6.3} {:>6} {:>12.6} {:>12.6}",
            r.algorithm, r.strategy, r.ratio, r.m, r.relative_error.mean, r.support_fraction.mean
        )
        .map_err(stdout_err)?;
    }
    writeln!(
        out,
        "{} records -> {} (summary {}, plot data {})",
        records.len(),
        cfg.out_path.display(),
        summary.display(),
        plot.display()
    )
    .map_err(stdout_err)
}

/// 64-bit FNV-1a over the little-endian bytes of `values`.
pub fn fnv1a(values: impl IntoIterator<Item = f64>) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for v in values {
        for b in v.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01B3);
        }
    }
    h
}

fn find_ratio(plan: &Plan, ratio: f64) -> Result<usize> {
    let m = (ratio * plan.n as f64).round() as usize;
    plan.points.iter().position(|p| p.m == m).ok_or_else(|| {
        let known: Vec<String> = plan.points.iter().map(|p| p.ratio.to_string()).collect();
        BenchError::config(format!("ratio {ratio} not in config (have {})", known.join(", ")))
    })
}

fn fmt_set(s: &IndexSet) -> String {
    let parts: Vec<String> = s.iter().map(|j| j.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn cmd_single(config: &Path, ratio: f64, trial: usize, verbose: bool, out: &mut dyn Write) -> Result<()> {
    let plan = BenchConfig::from_path(config)?.plan()?;
    let ri = find_ratio(&plan, ratio)?;
    let inst = trial_instance(&plan, ri, trial)?;
    let x = &inst.signal;
    let x_energy = x.vector.norm_sqr();
    let hash = fnv1a(inst.meas.sensing().as_row_major().iter().flat_map(|c| [c.re, c.im]));
    let mut w = |s: String| writeln!(out, "{s}").map_err(stdout_err);
    w(format!(
        "trial {trial} ratio {} m {} seed {} sensing_hash {hash:016x}",
        plan.points[ri].ratio, plan.points[ri].m, inst.seed
    ))?;
    w(format!(
        "signal {} n {} k {} ||x||^2 {:.6} lambda^2 {:.6} support {}",
        plan.signal.model.as_str(),
        plan.n,
        plan.k,
        x_energy,
        inst.meas.lambda_sq(),
        fmt_set(&x.support)
    ))?;
    for &alg in &plan.algorithms {
        let label = format!("{}/{}", alg.name(), alg.strategy());
        let est = match run_algorithm(alg, &inst, plan.k) {
            Ok(e) => e,
            Err(e) => {
                w(format!("{label}: failed: {e}"))?;
                continue;
            }
        };
        let d = dist(&est.z, &x.vector)?;
        let hit = est.support.intersection_len(&x.support);
        w(format!(
            "{label}: p {} rel_err {:.6} support {}/{}",
            est.p_used,
            d / x_energy.sqrt(),
            hit,
            plan.k
        ))?;
        if verbose {
            let s0_energy: f64 = est.s0.iter().map(|&j| x.vector[j].norm_sqr()).sum();
            w(format!("  S0 = {}", fmt_set(&est.s0)))?;
            w(format!("  |x_S0|^2/||x||^2 = {:.6}", s0_energy / x_energy))?;
            match &est.direction {
                Some(e0) => w(format!("  |x* e0| = {:.6}", inner(&x.vector, e0).norm()))?,
                None => w("  |x* e0| = -".to_string())?,
            }
            w(format!("  S1 = {}", fmt_set(&est.support)))?;
            w(format!("  |S1 ∩ supp| = {hit}"))?;
            w(format!("  dist(z, x) = {d:.6}"))?;
            w(format!("  eigen_iterations = {}", est.diagnostics.eigen_iterations))?;
        }
    }
    Ok(())
}

fn cmd_signal(config: &Path, out: &mut dyn Write) -> Result<()> {
    let plan = BenchConfig::from_path(config)?.plan()?;
    // The same draw as the signal of trial 0 at the first ratio.
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(plan.base_seed, 0, 0));
    let x = generate(&plan.signal, &mut rng)?;
    let k = plan.k;
    let mut w = |s: String| writeln!(out, "{s}").map_err(stdout_err);
    w(format!("signal {} n {} k {}", plan.signal.model.as_str(), plan.n, k))?;
    w(format!("{:>4} {:>16} {:>16} {:>16} {:>16}", "p", "s(p)", "p*s(p)", "theorem1", "corollary3"))?;
    let max_c3 = ceil_sqrt(k);
    for p in 1..=k {
        let s = structure_function(&x.profile, p)?;
        let t1 = p_objective(&x.profile, k, p, PVariant::Theorem1)?;
        let c3 = if p <= max_c3 {
            format!("{:.10}", p_objective(&x.profile, k, p, PVariant::Corollary3)?)
        } else {
            "-".to_string()
        };
        w(format!("{p:>4} {s:>16.10} {:>16.10} {t1:>16.10} {c3:>16}", p as f64 * s))?;
    }
    for variant in [PVariant::Theorem1, PVariant::Corollary3] {
        let p = p_opt(&x.profile, k, variant)?;
        let obj = p_objective(&x.profile, k, p, variant)?;
        w(format!("p_opt {} = {p} (objective {obj:.10})", variant.as_str()))?;
    }
    Ok(())
}

fn cmd_oracle(n: usize, k: usize, m: usize, seed: u64, out: &mut dyn Write) -> Result<()> {
    let spec = SignalModelSpec::new(SignalModel::Gaussian, n, k);
    spec.validate().map_err(|e| BenchError::config(e.to_string()))?;
    if m == 0 {
        return Err(BenchError::config("m must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = generate(&spec, &mut rng)?;
    let expect = expectation_oracle(&x)?;
    let full = IndexSet::full(n);
    let mut w = |s: String| writeln!(out, "{s}").map_err(stdout_err);
    w(format!("n {n} k {k} seed {seed}; target xx*/(4||x||^2)"))?;
    w(format!("{:>10} {:>14} {:>14} {:>14}", "m", "frob_err", "frob_err_ref", "lambda^2-1"))?;
    let mut errs = Vec::new();
    for mm in [m, 4 * m] {
        let meas = measure(&x, sample_sensing(n, mm, &mut rng)?)?;
        let z = SpectrumOperator::build(&meas, WeightingKind::Exponential)?.submatrix(&full)?;
        let zr = SpectrumOperator::build_with_reference_energy(&meas, x.vector.norm_sqr())?.submatrix(&full)?;
        let e = frobenius_distance(&z, &expect)?;
        let er = frobenius_distance(&zr, &expect)?;
        w(format!("{mm:>10} {e:>14.6e} {er:>14.6e} {:>14.6e}", meas.lambda_sq() - 1.0))?;
        errs.push(e);
    }
    w(format!("error ratio m -> 4m: {:.4} (1/sqrt(m) scaling predicts 2)", errs[0] / errs[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["gesp-bench"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        let (code, _, err) = call(&["run"]);
        assert_eq!(code, 1);
        assert!(err.contains("--config"));
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["run", "--config", "x.json", "--bogus"]).0, 1);
        assert_eq!(call(&[]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn missing_config_file_exits_one() {
        let (code, _, err) = call(&["signal", "--config", "/nonexistent/cfg.json"]);
        assert_eq!(code, 1);
        assert!(err.contains("/nonexistent/cfg.json"));
    }

    #[test]
    fn oracle_report() {
        let (code, out, _) = call(&["oracle", "--n", "8", "--k", "2", "--m", "2000", "--seed", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("error ratio"));
        assert_eq!(call(&["oracle", "--n", "8", "--k", "9", "--m", "20", "--seed", "3"]).0, 1);
    }

    #[test]
    fn sibling_names() {
        let (s, p) = sibling_paths(Path::new("out/run.csv"));
        assert_eq!(s, PathBuf::from("out/run_summary.csv"));
        assert_eq!(p, PathBuf::from("out/run.dat"));
    }

    #[test]
    fn fnv_reference() {
        assert_eq!(fnv1a([]), 0xCBF2_9CE4_8422_2325);
        assert_ne!(fnv1a([0.0]), fnv1a([-0.0]));
    }
}
