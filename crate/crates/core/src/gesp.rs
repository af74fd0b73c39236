//! Generalized exponential spectral pursuit.
//!
//! 1. `S0` = indices of the `p` largest diagonal entries of `Z`.
//! 2. `e0` = unit top eigenvector of `Z_{S0}`, embedded in `C^n`.
//! 3. `S1` = indices of the `k` largest entries of `|Z e0|`.
//! 4. `z` = top eigenvector of `Z_{S1}`, scaled so `||z||^2 = lambda^2`.
//!
//! With `p = 1` this reduces to the single-index exponential spectral pursuit
//! (see [`crate::baselines::esp_init`]).

use num_complex::Complex64;

use crate::eigen::max_eigvec_default;
use crate::error::{Error, Result};
use crate::measurement::MeasurementSet;
use crate::numerics::{ceil_sqrt, p_opt, top_k_indices, ComplexVec, IndexSet, MagnitudeProfile, PVariant};
use crate::spectrum::{SpectrumOperator, WeightingKind};

/// How the first step picks `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PStrategy {
    Fixed(usize),
    /// `p_opt` from the true signal's magnitude profile (oracle knowledge).
    KnownStructure(PVariant),
    /// `p = ceil(sqrt(k))`.
    SqrtK,
    /// `p = k`.
    FullK,
    /// Runs every `p in [k]` and keeps the estimate with the smallest
    /// [`residual_score`].
    Ensemble,
}

impl PStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            PStrategy::Fixed(_) => "fixed",
            PStrategy::KnownStructure(_) => "known_structure",
            PStrategy::SqrtK => "sqrt_k",
            PStrategy::FullK => "full_k",
            PStrategy::Ensemble => "ensemble",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    /// Eigensolver iterations summed over the steps that ran.
    pub eigen_iterations: usize,
    pub residual_score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitEstimate {
    pub z: ComplexVec,
    /// `S1`, the final support estimate.
    pub support: IndexSet,
    pub p_used: usize,
    pub s0: IndexSet,
    /// `e0` when the method has a direction step.
    pub direction: Option<ComplexVec>,
    pub diagnostics: Diagnostics,
}

/// Step 1.
pub fn step1_select_s0(diag: &[f64], p: usize) -> Result<IndexSet> {
    top_k_indices(diag, p)
}

/// Top eigenvector of `Z_S` embedded into `n` dimensions and multiplied by
/// `scale`, plus the eigensolver iteration count.
pub(crate) fn embedded_top_eigvec(
    op: &SpectrumOperator<'_>,
    s: &IndexSet,
    scale: f64,
) -> Result<(ComplexVec, usize)> {
    let sub = op.submatrix(s)?;
    let eig = max_eigvec_default(&sub)?;
    let mut out = vec![Complex64::new(0.0, 0.0); op.n()];
    for (&j, v) in s.iter().zip(eig.eigenvector.iter()) {
        out[j] = v * scale;
    }
    Ok((ComplexVec::new(out)?, eig.iterations))
}

/// Step 2: unit top eigenvector of `Z_{S0}`, zero off `S0`.
pub fn step2_direction(op: &SpectrumOperator<'_>, s0: &IndexSet) -> Result<ComplexVec> {
    embedded_top_eigvec(op, s0, 1.0).map(|(v, _)| v)
}

/// Step 3: `k` largest moduli of `Z e0`.
pub fn step3_select_s1(op: &SpectrumOperator<'_>, e0: &[Complex64], k: usize) -> Result<IndexSet> {
    let f = op.matvec(e0)?;
    let moduli: Vec<f64> = f.iter().map(|c| c.norm()).collect();
    top_k_indices(&moduli, k)
}

/// Step 4: top eigenvector of `Z_{S1}` with `||z||^2 = lambda_sq`.
pub fn step4_estimate(op: &SpectrumOperator<'_>, s1: &IndexSet, lambda_sq: f64) -> Result<ComplexVec> {
    embedded_top_eigvec(op, s1, lambda_sq.sqrt()).map(|(v, _)| v)
}

/// `(1/m) sum_i (y_i - |a_i^* z|)^2`.
pub fn residual_score(meas: &MeasurementSet, z: &[Complex64]) -> Result<f64> {
    if z.len() != meas.n() {
        return Err(Error::DimensionMismatch {
            expected: meas.n(),
            found: z.len(),
        });
    }
    let nz: Vec<usize> = (0..z.len())
        .filter(|&j| z[j].re != 0.0 || z[j].im != 0.0)
        .collect();
    let total: f64 = meas
        .sensing()
        .rows()
        .zip(meas.y())
        .map(|(row, &y)| {
            let ip: Complex64 = nz.iter().map(|&j| row[j].conj() * z[j]).sum();
            let r = y - ip.norm();
            r * r
        })
        .sum();
    Ok(total / meas.m() as f64)
}

/// Steps 1-4 for a given `p` on a prebuilt exponential operator. `diag` must
/// be `op.diagonal()`; it is passed in so callers running several `p` values
/// compute it once.
pub fn run_with_p(op: &SpectrumOperator<'_>, diag: &[f64], k: usize, p: usize) -> Result<InitEstimate> {
    let meas = op.measurements();
    let s0 = step1_select_s0(diag, p)?;
    let (e0, it0) = embedded_top_eigvec(op, &s0, 1.0)?;
    let s1 = step3_select_s1(op, &e0, k)?;
    let (z, it1) = embedded_top_eigvec(op, &s1, meas.lambda_sq().sqrt())?;
    let score = residual_score(meas, &z)?;
    Ok(InitEstimate {
        z,
        support: s1,
        p_used: p,
        s0,
        direction: Some(e0),
        diagnostics: Diagnostics {
            eigen_iterations: it0 + it1,
            residual_score: score,
        },
    })
}

/// Resolves the `p` a (non-ensemble) strategy would use.
pub fn resolve_p(strategy: PStrategy, k: usize, true_profile: Option<&MagnitudeProfile>) -> Result<usize> {
    match strategy {
        PStrategy::Fixed(p) => {
            if p == 0 || p > k {
                return Err(Error::invalid(format!("fixed p = {p} outside [1, {k}]")));
            }
            Ok(p)
        }
        PStrategy::KnownStructure(variant) => {
            let profile = true_profile.ok_or_else(|| {
                Error::invalid("known_structure needs the true magnitude profile")
            })?;
            p_opt(profile, k, variant)
        }
        PStrategy::SqrtK => Ok(ceil_sqrt(k)),
        PStrategy::FullK => Ok(k),
        PStrategy::Ensemble => Err(Error::invalid("ensemble runs every p in [k]")),
    }
}

/// Runs the initializer with the given `p` strategy.
///
/// `true_profile` is only consulted by [`PStrategy::KnownStructure`].
pub fn gesp(
    meas: &MeasurementSet,
    k: usize,
    strategy: PStrategy,
    true_profile: Option<&MagnitudeProfile>,
) -> Result<InitEstimate> {
    if k == 0 || k > meas.n() {
        return Err(Error::invalid(format!("k = {k} outside [1, {}]", meas.n())));
    }
    let op = SpectrumOperator::build(meas, WeightingKind::Exponential)?;
    let diag = op.diagonal();
    if strategy == PStrategy::Ensemble {
        let mut best = run_with_p(&op, &diag, k, 1)?;
        let mut iterations = best.diagnostics.eigen_iterations;
        for p in 2..=k {
            let est = run_with_p(&op, &diag, k, p)?;
            iterations += est.diagnostics.eigen_iterations;
            if est.diagnostics.residual_score < best.diagnostics.residual_score {
                best = est;
            }
        }
        best.diagnostics.eigen_iterations = iterations;
        return Ok(best);
    }
    let p = resolve_p(strategy, k, true_profile)?;
    run_with_p(&op, &diag, k, p)
}
