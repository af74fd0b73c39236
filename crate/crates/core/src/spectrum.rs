//! Matrix-free weighted outer-product spectrum `Z = (1/m) sum_i w_i a_i a_i^*`.
//!
//! `Z` is never formed. The initializers only need its diagonal, small
//! principal submatrices and products with vectors supported on a few
//! indices, all of which are computed directly from the sensing rows. Every
//! reduction runs over the rows in index order, so results do not depend on
//! the calling thread.

use num_complex::Complex64;

use crate::eigen::HermitianMatrix;
use crate::error::{Error, Result};
use crate::measurement::MeasurementSet;
use crate::numerics::{norm_sqr, IndexSet};
use crate::signal::SparseSignal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightingKind {
    /// `w_i = 1/2 - exp(-y_i^2 / lambda^2)`.
    Exponential,
    /// `w_i = y_i^2`.
    Quadratic,
}

#[derive(Debug, Clone)]
pub struct SpectrumOperator<'a> {
    meas: &'a MeasurementSet,
    weights: Vec<f64>,
    kind: WeightingKind,
}

fn exponential_weights(y: &[f64], energy: f64) -> Vec<f64> {
    y.iter().map(|&v| 0.5 - (-(v * v) / energy).exp()).collect()
}

impl<'a> SpectrumOperator<'a> {
    pub fn build(meas: &'a MeasurementSet, kind: WeightingKind) -> Result<Self> {
        if meas.lambda_sq() <= 0.0 {
            return Err(Error::Degenerate(
                "all observations are zero (lambda^2 = 0)".into(),
            ));
        }
        let weights = match kind {
            WeightingKind::Exponential => exponential_weights(meas.y(), meas.lambda_sq()),
            WeightingKind::Quadratic => meas.y().iter().map(|v| v * v).collect(),
        };
        Ok(SpectrumOperator { meas, weights, kind })
    }

    /// Exponential spectrum normalized by a caller-supplied energy instead of
    /// `lambda^2`. With the true `||x||^2` this is the analysis-side spectrum
    /// whose expectation is [`expectation_oracle`]; it is not usable at solve
    /// time, where `||x||` is unknown.
    pub fn build_with_reference_energy(meas: &'a MeasurementSet, energy: f64) -> Result<Self> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::Degenerate("reference energy must be positive".into()));
        }
        Ok(SpectrumOperator {
            meas,
            weights: exponential_weights(meas.y(), energy),
            kind: WeightingKind::Exponential,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn kind(&self) -> WeightingKind {
        self.kind
    }

    pub fn measurements(&self) -> &'a MeasurementSet {
        self.meas
    }

    pub fn n(&self) -> usize {
        self.meas.n()
    }

    /// `Z_jj = (1/m) sum_i w_i |a_ij|^2`, O(mn).
    pub fn diagonal(&self) -> Vec<f64> {
        let n = self.n();
        let mut acc = vec![0.0; n];
        for (row, &w) in self.meas.sensing().rows().zip(&self.weights) {
            for (a, r) in acc.iter_mut().zip(row) {
                *a += w * r.norm_sqr();
            }
        }
        let m = self.meas.m() as f64;
        acc.into_iter().map(|v| v / m).collect()
    }

    /// `Z_S` for index set `S`; the upper triangle is computed and mirrored.
    pub fn submatrix(&self, s: &IndexSet) -> Result<HermitianMatrix> {
        if s.is_empty() {
            return Err(Error::invalid("submatrix index set is empty"));
        }
        if let Some(mx) = s.max() {
            if mx >= self.n() {
                return Err(Error::invalid(format!("index {mx} out of range for n = {}", self.n())));
            }
        }
        let d = s.len();
        let mut acc = vec![Complex64::new(0.0, 0.0); d * d];
        let mut gathered = vec![Complex64::new(0.0, 0.0); d];
        for (row, &w) in self.meas.sensing().rows().zip(&self.weights) {
            for (g, &j) in gathered.iter_mut().zip(s.iter()) {
                *g = row[j];
            }
            for u in 0..d {
                let au = gathered[u] * w;
                for v in u..d {
                    acc[u * d + v] += au * gathered[v].conj();
                }
            }
        }
        let m = self.meas.m() as f64;
        Ok(HermitianMatrix::from_upper(d, |u, v| acc[u * d + v] / m))
    }

    /// `Z v = (1/m) sum_i w_i (a_i^* v) a_i`. Inner products only touch the
    /// nonzero entries of `v`, so the cost is `O(m (nnz(v) + n))`.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let nz: Vec<(usize, Complex64)> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(j, c)| (j, *c))
            .collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        if nz.is_empty() {
            return Ok(out);
        }
        for (row, &w) in self.meas.sensing().rows().zip(&self.weights) {
            let ip: Complex64 = nz.iter().map(|&(j, c)| row[j].conj() * c).sum();
            let coef = ip * w;
            for (o, a) in out.iter_mut().zip(row) {
                *o += coef * a;
            }
        }
        let m = self.meas.m() as f64;
        for o in out.iter_mut() {
            *o /= m;
        }
        Ok(out)
    }
}

/// `x x^* / (4 ||x||^2)`: the expectation of the exponential spectrum built
/// with the true signal energy. Dense `n x n`; meant for small `n`.
pub fn expectation_oracle(x: &SparseSignal) -> Result<HermitianMatrix> {
    expectation_oracle_vec(&x.vector)
}

pub fn expectation_oracle_vec(x: &[Complex64]) -> Result<HermitianMatrix> {
    let energy = norm_sqr(x);
    if energy <= 0.0 {
        return Err(Error::invalid("signal has zero norm"));
    }
    Ok(HermitianMatrix::from_upper(x.len(), |u, v| {
        x[u] * x[v].conj() / (4.0 * energy)
    }))
}

/// Frobenius norm of the difference of two equally sized matrices.
pub fn frobenius_distance(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(a.as_row_major()
        .iter()
        .zip(b.as_row_major())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}
