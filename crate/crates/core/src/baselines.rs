//! Comparison initializers.
//!
//! * `esp`: the four-step method with a single seed index (`p = 1`).
//! * `diag_two_step`: top-`k` diagonal of the quadratic spectrum
//!   `(1/m) sum y_i^2 a_i a_i^*`, then its top eigenvector on that support.
//!   Stands in for the CoPRAM-style initialization stage.
//! * `truncated_power`: generic truncated power method on the exponential
//!   spectrum, started from the `diag_two_step` direction. Stands in for TPM;
//!   its original hyperparameters are not reproduced.

use num_complex::Complex64;

use crate::error::Result;
use crate::gesp::{embedded_top_eigvec, gesp, residual_score, Diagnostics, InitEstimate, PStrategy};
use crate::measurement::MeasurementSet;
use crate::numerics::{inner, top_k_indices, ComplexVec, IndexSet};
use crate::spectrum::{SpectrumOperator, WeightingKind};

pub const DEFAULT_TPM_ITERS: usize = 50;

/// Early-exit threshold on the phase-aligned change between TPM iterates.
const TPM_CHANGE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    Esp,
    DiagTwoStep,
    TruncatedPower { iters: usize },
}

impl BaselineKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BaselineKind::Esp => "esp",
            BaselineKind::DiagTwoStep => "diag_two_step",
            BaselineKind::TruncatedPower { .. } => "truncated_power",
        }
    }
}

pub fn esp_init(meas: &MeasurementSet, k: usize) -> Result<InitEstimate> {
    gesp(meas, k, PStrategy::Fixed(1), None)
}

pub fn diag_two_step_init(meas: &MeasurementSet, k: usize) -> Result<InitEstimate> {
    let op = SpectrumOperator::build(meas, WeightingKind::Quadratic)?;
    let support = top_k_indices(&op.diagonal(), k)?;
    let (z, iterations) = embedded_top_eigvec(&op, &support, meas.lambda_sq().sqrt())?;
    let score = residual_score(meas, &z)?;
    Ok(InitEstimate {
        z,
        s0: support.clone(),
        support,
        p_used: k,
        direction: None,
        diagnostics: Diagnostics {
            eigen_iterations: iterations,
            residual_score: score,
        },
    })
}

/// Keeps the `k` largest-modulus entries of `v`; returns the kept set.
fn truncate_top_k(v: &mut [Complex64], k: usize) -> Result<IndexSet> {
    let moduli: Vec<f64> = v.iter().map(|c| c.norm()).collect();
    let keep = top_k_indices(&moduli, k)?;
    for (j, c) in v.iter_mut().enumerate() {
        if !keep.contains(j) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    Ok(keep)
}

fn aligned_change(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ip = inner(b, a);
    let rot = if ip.norm() > 0.0 {
        ip / ip.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - rot * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn truncated_power_init(meas: &MeasurementSet, k: usize, iters: usize) -> Result<InitEstimate> {
    let start = diag_two_step_init(meas, k)?;
    let lam = meas.lambda_sq().sqrt();
    let mut v: Vec<Complex64> = start.z.iter().map(|c| c / lam).collect();
    let mut support = start.support.clone();
    let op = SpectrumOperator::build(meas, WeightingKind::Exponential)?;
    for _ in 0..iters {
        let mut next = op.matvec(&v)?;
        let kept = truncate_top_k(&mut next, k)?;
        let nrm = next.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if nrm == 0.0 {
            break;
        }
        for c in next.iter_mut() {
            *c /= nrm;
        }
        let change = aligned_change(&next, &v);
        v = next;
        support = kept;
        if change < TPM_CHANGE_TOL {
            break;
        }
    }
    let z = ComplexVec::new(v.into_iter().map(|c| c * lam).collect())?;
    let score = residual_score(meas, &z)?;
    Ok(InitEstimate {
        z,
        support,
        p_used: k,
        s0: start.support,
        direction: None,
        diagnostics: Diagnostics {
            eigen_iterations: start.diagnostics.eigen_iterations,
            residual_score: score,
        },
    })
}

pub fn run_baseline(meas: &MeasurementSet, k: usize, kind: BaselineKind) -> Result<InitEstimate> {
    match kind {
        BaselineKind::Esp => esp_init(meas, k),
        BaselineKind::DiagTwoStep => diag_two_step_init(meas, k),
        BaselineKind::TruncatedPower { iters } => truncated_power_init(meas, k, iters),
    }
}
