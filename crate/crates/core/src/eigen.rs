//! Top eigenpair of a small Hermitian matrix.
//!
//! The solver is shifted power iteration. The shift is the Gershgorin bound
//! `sigma = max_u sum_v |M_uv|`, so `B = M + sigma I` is positive semidefinite
//! and the largest *algebraic* eigenvalue of `M` becomes the dominant one of
//! `B`. Iterates are `B^(2^j) v0` (the operator is squared between steps,
//! which keeps the iteration count logarithmic in the inverse spectral gap)
//! followed by plain `v <- B v` steps until the residual contract holds.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{inner, norm_sqr, ComplexVec};

pub const DEFAULT_TOL: f64 = 1e-10;

pub fn default_max_iter(dim: usize) -> usize {
    10 * dim + 500
}

/// Square Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Checks exact Hermitian symmetry.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("matrix dimension must be >= 1"));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let m = HermitianMatrix { dim, data };
        for u in 0..dim {
            for v in u..dim {
                if m.get(u, v) != m.get(v, u).conj() {
                    return Err(Error::invalid(format!("matrix not Hermitian at ({u}, {v})")));
                }
            }
        }
        Ok(m)
    }

    /// Builds from the upper triangle; the lower triangle is mirrored and the
    /// diagonal made exactly real.
    pub fn from_upper(dim: usize, mut entry: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for u in 0..dim {
            data[u * dim + u] = Complex64::new(entry(u, u).re, 0.0);
            for v in (u + 1)..dim {
                let e = entry(u, v);
                data[u * dim + v] = e;
                data[v * dim + u] = e.conj();
            }
        }
        HermitianMatrix { dim, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d = diag.len();
        if d == 0 {
            return Err(Error::invalid("matrix dimension must be >= 1"));
        }
        Ok(Self::from_upper(d, |u, v| {
            if u == v {
                Complex64::new(diag[u], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, u: usize, v: usize) -> Complex64 {
        self.data[u * self.dim + v]
    }

    pub fn as_row_major(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|u| self.get(u, u).re).collect()
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Rows as nested vectors, handy for dense reference code.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks_exact(self.dim).map(<[_]>::to_vec).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub eigenvalue: f64,
    pub eigenvector: ComplexVec,
    pub iterations: usize,
    pub residual: f64,
}

/// Rotates `v` so that its largest-modulus entry (smallest index on ties) is
/// real and non-negative.
pub fn canonicalize_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, c) in v.iter().enumerate() {
        if c.norm_sqr() > v[best].norm_sqr() {
            best = i;
        }
    }
    let pivot = v[best];
    let mag = pivot.norm();
    if mag == 0.0 {
        return;
    }
    let rot = pivot.conj() / mag;
    for c in v.iter_mut() {
        *c *= rot;
    }
    v[best] = Complex64::new(mag, 0.0);
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let nrm = norm_sqr(v).sqrt();
    if nrm > 0.0 {
        for c in v.iter_mut() {
            *c /= nrm;
        }
    }
    nrm
}

/// `|| a - e^{j phi} b ||` with `phi` aligning `b` to `a`.
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

fn dense_mul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for l in 0..d {
            let ail = a[i * d + l];
            if ail.re == 0.0 && ail.im == 0.0 {
                continue;
            }
            let brow = &b[l * d..(l + 1) * d];
            let orow = &mut out[i * d..(i + 1) * d];
            for (o, bv) in orow.iter_mut().zip(brow) {
                *o += ail * bv;
            }
        }
    }
    out
}

fn dense_apply(a: &[Complex64], v: &[Complex64], d: usize) -> Vec<Complex64> {
    a.chunks_exact(d)
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn scale_to_unit_max(a: &mut [Complex64]) {
    let mx = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if mx > 0.0 {
        for c in a.iter_mut() {
            *c /= mx;
        }
    }
}

fn rayleigh(m: &HermitianMatrix, v: &[Complex64]) -> (f64, f64) {
    let mv = m.matvec(v);
    let tau = inner(v, &mv).re;
    let res = mv
        .iter()
        .zip(v)
        .map(|(a, b)| (a - b * tau).norm_sqr())
        .sum::<f64>()
        .sqrt();
    (tau, res)
}

/// Deterministic starting vector: basis vector at the largest diagonal entry
/// plus `1e-3 (1 + j) / sqrt(2d)` on every entry, normalized.
fn start_vector(m: &HermitianMatrix) -> Vec<Complex64> {
    let d = m.dim;
    let diag = m.diagonal();
    let mut top = 0;
    for (i, &v) in diag.iter().enumerate() {
        if v > diag[top] {
            top = i;
        }
    }
    let pert = Complex64::new(1.0, 1.0) * (1e-3 / (2.0 * d as f64).sqrt());
    let mut v = vec![pert; d];
    v[top] += 1.0;
    normalize(&mut v);
    v
}

/// Eigenvector of the largest algebraic eigenvalue of `m`.
///
/// Returns once `||M v - tau v|| <= tol * max(1, |tau|)`; the eigenvector is
/// phase-canonical (see [`canonicalize_phase`]). Exact top-eigenvalue ties
/// yield some unit vector of the top eigenspace.
pub fn max_eigvec(m: &HermitianMatrix, tol: f64, max_iter: usize) -> Result<EigResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let d = m.dim;
    if d == 1 {
        return Ok(EigResult {
            eigenvalue: m.get(0, 0).re,
            eigenvector: ComplexVec::new(vec![Complex64::new(1.0, 0.0)])?,
            iterations: 0,
            residual: 0.0,
        });
    }
    let sigma = m
        .data
        .chunks_exact(d)
        .map(|row| row.iter().map(|c| c.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let v0 = start_vector(m);
    let finish = |mut v: Vec<Complex64>, iterations: usize| -> Result<EigResult> {
        let (tau, residual) = rayleigh(m, &v);
        canonicalize_phase(&mut v);
        Ok(EigResult {
            eigenvalue: tau,
            eigenvector: ComplexVec::new(v)?,
            iterations,
            residual,
        })
    };
    if sigma == 0.0 {
        return finish(v0, 0);
    }

    let mut shifted = m.data.clone();
    for u in 0..d {
        shifted[u * d + u] += sigma;
    }
    let accepts = |v: &[Complex64]| {
        let (tau, res) = rayleigh(m, v);
        res <= tol * tau.abs().max(1.0)
    };

    let mut iterations = 0;
    // Squaring phase: v_j = normalize(B^(2^j) v0).
    let mut power = shifted.clone();
    scale_to_unit_max(&mut power);
    let mut v = dense_apply(&power, &v0, d);
    if normalize(&mut v) == 0.0 {
        v = v0.clone();
    }
    while iterations < max_iter {
        iterations += 1;
        power = dense_mul(&power, &power, d);
        scale_to_unit_max(&mut power);
        let mut next = dense_apply(&power, &v0, d);
        if normalize(&mut next) == 0.0 {
            break;
        }
        let change = aligned_change(&next, &v);
        v = next;
        if change < tol {
            break;
        }
    }
    // Plain power steps on B until the residual contract holds.
    while !accepts(&v) {
        if iterations >= max_iter {
            let (_, residual) = rayleigh(m, &v);
            return Err(Error::NonConvergence {
                iterations,
                residual,
                last_iterate: v,
            });
        }
        iterations += 1;
        let mut next = dense_apply(&shifted, &v, d);
        if normalize(&mut next) == 0.0 {
            break;
        }
        v = next;
    }
    finish(v, iterations)
}

/// [`max_eigvec`] with the default tolerance and iteration cap.
pub fn max_eigvec_default(m: &HermitianMatrix) -> Result<EigResult> {
    max_eigvec(m, DEFAULT_TOL, default_max_iter(m.dim()))
}
