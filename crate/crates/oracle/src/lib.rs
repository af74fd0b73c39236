//! Dense, deliberately naive reference implementations.
//!
//! Nothing here is used by the library path. Every routine builds the full
//! object (explicit n x n spectrum, full eigendecomposition, full sort) so the
//! test suites can check the matrix-free code against something independent.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Row-major square complex matrix.
pub type Dense = Vec<Vec<C64>>;

/// Explicit `(1/m) sum_i w_i a_i a_i^*` from row-major sensing rows.
pub fn dense_spectrum(rows: &[Vec<C64>], weights: &[f64]) -> Dense {
    let n = rows[0].len();
    let m = rows.len() as f64;
    let mut z = vec![vec![C64::new(0.0, 0.0); n]; n];
    for (row, &w) in rows.iter().zip(weights) {
        for u in 0..n {
            for v in 0..n {
                z[u][v] += row[u] * row[v].conj() * w;
            }
        }
    }
    for r in z.iter_mut() {
        for e in r.iter_mut() {
            *e /= m;
        }
    }
    z
}

/// Exponential weights `1/2 - exp(-y^2 / energy)`.
pub fn exponential_weights(y: &[f64], energy: f64) -> Vec<f64> {
    y.iter().map(|&yi| 0.5 - (-(yi * yi) / energy).exp()).collect()
}

pub fn quadratic_weights(y: &[f64]) -> Vec<f64> {
    y.iter().map(|&yi| yi * yi).collect()
}

pub fn mean_sq(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64
}

pub fn submatrix(z: &Dense, idx: &[usize]) -> Dense {
    idx.iter()
        .map(|&u| idx.iter().map(|&v| z[u][v]).collect())
        .collect()
}

pub fn matvec(z: &Dense, v: &[C64]) -> Vec<C64> {
    z.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations on
/// the real symmetric embedding `[[Re, -Im], [Im, Re]]`.
///
/// Returns eigenvalues in descending order with matching unit eigenvectors.
/// Each complex eigenvalue appears twice in the embedding; duplicates are
/// collapsed by taking every other entry of the sorted list.
pub fn jacobi_hermitian(h: &Dense) -> (Vec<f64>, Vec<Vec<C64>>) {
    let d = h.len();
    let n2 = 2 * d;
    let mut a = vec![vec![0.0f64; n2]; n2];
    for u in 0..d {
        for v in 0..d {
            let e = h[u][v];
            a[u][v] = e.re;
            a[u + d][v + d] = e.re;
            a[u][v + d] = -e.im;
            a[u + d][v] = e.im;
        }
    }
    let mut vecs = vec![vec![0.0f64; n2]; n2];
    for (i, r) in vecs.iter_mut().enumerate() {
        r[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n2)
            .flat_map(|i| (0..n2).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n2).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n2 {
            for q in (p + 1)..n2 {
                let apq = a[p][q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n2 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n2 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for r in vecs.iter_mut() {
                    let vp = r[p];
                    let vq = r[q];
                    r[p] = c * vp - s * vq;
                    r[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n2).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let mut values = Vec::with_capacity(d);
    let mut vectors = Vec::with_capacity(d);
    for &col in order.iter().step_by(2) {
        values.push(a[col][col]);
        let v: Vec<C64> = (0..d)
            .map(|u| C64::new(vecs[u][col], vecs[u + d][col]))
            .collect();
        let nrm = v.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt();
        vectors.push(v.into_iter().map(|e| e / nrm).collect());
    }
    (values, vectors)
}

/// Top eigenpair (largest algebraic eigenvalue).
pub fn top_eigpair(h: &Dense) -> (f64, Vec<C64>) {
    let (vals, vecs) = jacobi_hermitian(h);
    (vals[0], vecs[0].clone())
}

/// Indices of the `k` largest values by full stable sort; ties keep the
/// smaller index first. Returned ascending.
pub fn sort_top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
    let mut out: Vec<usize> = idx.into_iter().take(k).collect();
    out.sort_unstable();
    out
}

/// `min_phi ||u - e^{j phi} v||` by evaluating `points` equally spaced phases.
pub fn phase_grid_dist(u: &[C64], v: &[C64], points: usize) -> f64 {
    let mut best = f64::INFINITY;
    for t in 0..points {
        let phi = 2.0 * std::f64::consts::PI * t as f64 / points as f64;
        let rot = C64::from_polar(1.0, phi);
        let d: f64 = u
            .iter()
            .zip(v)
            .map(|(a, b)| (a - rot * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        best = best.min(d);
    }
    best
}

/// Distance after aligning `v` to `u` by the phase of `v^* u`.
pub fn aligned_gap(u: &[C64], v: &[C64]) -> f64 {
    let ip: C64 = v.iter().zip(u).map(|(a, b)| a.conj() * b).sum();
    let rot = if ip.norm() > 0.0 {
        ip / ip.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - rot * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Outcome of the dense reference pipeline.
#[derive(Debug, Clone)]
pub struct DenseGesp {
    pub s0: Vec<usize>,
    pub e0: Vec<C64>,
    pub s1: Vec<usize>,
    pub z: Vec<C64>,
}

/// Four-step pipeline on an explicit dense exponential spectrum.
pub fn dense_gesp(rows: &[Vec<C64>], y: &[f64], k: usize, p: usize) -> DenseGesp {
    let n = rows[0].len();
    let lam = mean_sq(y);
    let z = dense_spectrum(rows, &exponential_weights(y, lam));
    let diag: Vec<f64> = (0..n).map(|j| z[j][j].re).collect();
    let s0 = sort_top_k(&diag, p);
    let (_, dir) = top_eigpair(&submatrix(&z, &s0));
    let mut e0 = vec![C64::new(0.0, 0.0); n];
    for (&j, &v) in s0.iter().zip(&dir) {
        e0[j] = v;
    }
    let f = matvec(&z, &e0);
    let mods: Vec<f64> = f.iter().map(|c| c.norm()).collect();
    let s1 = sort_top_k(&mods, k);
    let (_, v1) = top_eigpair(&submatrix(&z, &s1));
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (&j, &v) in s1.iter().zip(&v1) {
        out[j] = v * lam.sqrt();
    }
    DenseGesp { s0, e0, s1, z: out }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_on_diagonal() {
        let c = |r: f64| C64::new(r, 0.0);
        let h = vec![
            vec![c(3.0), c(0.0), c(0.0)],
            vec![c(0.0), c(1.0), c(0.0)],
            vec![c(0.0), c(0.0), c(-5.0)],
        ];
        let (vals, vecs) = jacobi_hermitian(&h);
        assert!((vals[0] - 3.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        assert!((vals[2] + 5.0).abs() < 1e-14);
        assert!((vecs[0][0].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_complex_two_by_two() {
        // [[2, j], [-j, 2]] has eigenvalues 3 and 1.
        let h = vec![
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ];
        let (vals, vecs) = jacobi_hermitian(&h);
        assert!((vals[0] - 3.0).abs() < 1e-13);
        assert!((vals[1] - 1.0).abs() < 1e-13);
        let hv = matvec(&h, &vecs[0]);
        for (a, b) in hv.iter().zip(&vecs[0]) {
            assert!((a - b * 3.0).norm() < 1e-12);
        }
    }

    #[test]
    fn sort_top_k_ties() {
        assert_eq!(sort_top_k(&[0.3, 0.9, 0.9, 0.1], 2), vec![1, 2]);
        assert_eq!(sort_top_k(&[1.0, 1.0, 1.0], 2), vec![0, 1]);
    }
}
