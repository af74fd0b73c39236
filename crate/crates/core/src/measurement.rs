//! Complex Gaussian sensing and phaseless observations `y_i = |a_i^* x|`.

use std::io::{self, Read, Write};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::signal::SparseSignal;

/// Dense `m x n` sensing array, row `i` is `a_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    n: usize,
    m: usize,
    data: Vec<Complex64>,
}

impl SensingMatrix {
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(Error::invalid("sensing array must be non-empty"));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(SensingMatrix {
            n,
            m,
            data: rows.concat(),
        })
    }

    pub fn from_row_major(m: usize, n: usize, data: Vec<Complex64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("sensing array must be non-empty"));
        }
        if data.len() != m * n {
            return Err(Error::DimensionMismatch {
                expected: m * n,
                found: data.len(),
            });
        }
        Ok(SensingMatrix { n, m, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Complex64]> {
        self.data.chunks_exact(self.n)
    }

    pub fn as_row_major(&self) -> &[Complex64] {
        &self.data
    }
}

/// `m x n` array of i.i.d. standard complex Gaussians (real and imaginary
/// parts independent `N(0, 1/2)`), drawn row by row.
pub fn sample_sensing<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<SensingMatrix> {
    if n == 0 || m == 0 {
        return Err(Error::invalid(format!("sensing needs n, m >= 1 (got n = {n}, m = {m})")));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let data = (0..n * m)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect();
    Ok(SensingMatrix { n, m, data })
}

/// Sensing rows together with their phaseless observations.
///
/// Immutable once built. `lambda_sq` is `(1/m) sum y_i^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    sensing: SensingMatrix,
    y: Vec<f64>,
    lambda_sq: f64,
}

const MAGIC: &[u8; 5] = b"SPRM1";

impl MeasurementSet {
    /// Pairs sensing rows with externally supplied observations.
    pub fn from_parts(sensing: SensingMatrix, y: Vec<f64>) -> Result<Self> {
        if y.len() != sensing.m {
            return Err(Error::DimensionMismatch {
                expected: sensing.m,
                found: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("observations must be finite and non-negative"));
        }
        let lambda_sq = y.iter().map(|v| v * v).sum::<f64>() / y.len() as f64;
        Ok(MeasurementSet {
            sensing,
            y,
            lambda_sq,
        })
    }

    pub fn sensing(&self) -> &SensingMatrix {
        &self.sensing
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn lambda_sq(&self) -> f64 {
        self.lambda_sq
    }

    pub fn n(&self) -> usize {
        self.sensing.n
    }

    pub fn m(&self) -> usize {
        self.sensing.m
    }

    /// Writes the `SPRM1` dump: magic, `n` and `m` as little-endian `u64`,
    /// row-major `(re, im)` pairs, then `y`, all as little-endian `f64`.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.n() as u64).to_le_bytes())?;
        w.write_all(&(self.m() as u64).to_le_bytes())?;
        for c in &self.sensing.data {
            w.write_all(&c.re.to_le_bytes())?;
            w.write_all(&c.im.to_le_bytes())?;
        }
        for v in &self.y {
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let io_err = |e: io::Error| Error::invalid(format!("measurement dump: {e}"));
        let mut magic = [0u8; 5];
        r.read_exact(&mut magic).map_err(io_err)?;
        if &magic != MAGIC {
            return Err(Error::invalid("measurement dump: bad magic"));
        }
        let mut word = [0u8; 8];
        let mut next_u64 = |r: &mut R| -> Result<u64> {
            r.read_exact(&mut word).map_err(io_err)?;
            Ok(u64::from_le_bytes(word))
        };
        let n = next_u64(&mut r)? as usize;
        let m = next_u64(&mut r)? as usize;
        let next_f64 = |r: &mut R| -> Result<f64> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b).map_err(io_err)?;
            Ok(f64::from_le_bytes(b))
        };
        let total = n
            .checked_mul(m)
            .ok_or_else(|| Error::invalid("measurement dump: size overflow"))?;
        let mut data = Vec::with_capacity(total);
        for _ in 0..total {
            let re = next_f64(&mut r)?;
            let im = next_f64(&mut r)?;
            data.push(Complex64::new(re, im));
        }
        let y = (0..m).map(|_| next_f64(&mut r)).collect::<Result<Vec<_>>>()?;
        MeasurementSet::from_parts(SensingMatrix::from_row_major(m, n, data)?, y)
    }
}

/// Observes `x` through every row of `sensing`.
pub fn measure(x: &SparseSignal, sensing: SensingMatrix) -> Result<MeasurementSet> {
    measure_vector(&x.vector, sensing)
}

/// [`measure`] for a plain vector. Inner products visit the nonzero entries
/// of `x` in index order.
pub fn measure_vector(x: &[Complex64], sensing: SensingMatrix) -> Result<MeasurementSet> {
    if x.len() != sensing.n {
        return Err(Error::DimensionMismatch {
            expected: sensing.n,
            found: x.len(),
        });
    }
    let nz: Vec<usize> = (0..x.len())
        .filter(|&j| x[j].re != 0.0 || x[j].im != 0.0)
        .collect();
    let y = sensing
        .rows()
        .map(|row| {
            let ip: Complex64 = nz.iter().map(|&j| row[j].conj() * x[j]).sum();
            ip.norm_sqr().sqrt()
        })
        .collect();
    MeasurementSet::from_parts(sensing, y)
}
