//! k-sparse ground-truth generators.
//!
//! Three benchmark models (complex Gaussian, binary, exponentially decaying)
//! plus two fixed magnitude tables whose structure function is known in closed
//! form. All generators draw the support uniformly and rescale the result to
//! `target_norm`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::seq::{index, SliceRandom};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{magnitude_profile, ComplexVec, IndexSet, MagnitudeProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalModel {
    Gaussian,
    Binary,
    ExpDecay,
    Example1,
    Example2,
}

impl SignalModel {
    pub fn as_str(self) -> &'static str {
        match self {
            SignalModel::Gaussian => "gaussian",
            SignalModel::Binary => "binary",
            SignalModel::ExpDecay => "exp_decay",
            SignalModel::Example1 => "example1",
            SignalModel::Example2 => "example2",
        }
    }
}

pub const DEFAULT_DECAY: f64 = 0.7;

#[derive(Debug, Clone, PartialEq)]
pub struct SignalModelSpec {
    pub model: SignalModel,
    pub n: usize,
    pub k: usize,
    /// Ratio between consecutive squared magnitudes (`exp_decay` only).
    pub decay: f64,
    pub target_norm: f64,
}

impl SignalModelSpec {
    pub fn new(model: SignalModel, n: usize, k: usize) -> Self {
        SignalModelSpec {
            model,
            n,
            k,
            decay: DEFAULT_DECAY,
            target_norm: 1.0,
        }
    }

    pub fn with_decay(mut self, decay: f64) -> Self {
        self.decay = decay;
        self
    }

    pub fn with_target_norm(mut self, target_norm: f64) -> Self {
        self.target_norm = target_norm;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 {
            return Err(Error::invalid("n and k must be positive"));
        }
        if self.k > self.n {
            return Err(Error::invalid(format!("k = {} exceeds n = {}", self.k, self.n)));
        }
        if !(self.target_norm.is_finite() && self.target_norm > 0.0) {
            return Err(Error::invalid("target_norm must be positive"));
        }
        match self.model {
            SignalModel::ExpDecay if !(self.decay > 0.0 && self.decay < 1.0) => {
                Err(Error::invalid("decay must lie in (0, 1)"))
            }
            SignalModel::Example1 if exact_root(self.k, 6).is_none() => Err(Error::invalid(
                format!("example1 needs integer sqrt(k) and k^(1/6); k = {}", self.k),
            )),
            SignalModel::Example2 if exact_root(self.k, 4).is_none() => Err(Error::invalid(
                format!("example2 needs integer sqrt(k) and k^(1/4); k = {}", self.k),
            )),
            _ => Ok(()),
        }
    }
}

/// Ground-truth signal with its support and sorted magnitude profile.
#[derive(Debug, Clone)]
pub struct SparseSignal {
    pub vector: ComplexVec,
    pub support: IndexSet,
    pub profile: MagnitudeProfile,
}

impl SparseSignal {
    pub fn n(&self) -> usize {
        self.vector.len()
    }

    pub fn k(&self) -> usize {
        self.support.len()
    }

    /// Same signal multiplied by `e^{j phi}`.
    pub fn rotated(&self, phi: f64) -> SparseSignal {
        let rot = Complex64::from_polar(1.0, phi);
        let v: Vec<Complex64> = self.vector.iter().map(|c| c * rot).collect();
        SparseSignal {
            vector: ComplexVec::new(v).expect("rotation keeps entries finite"),
            support: self.support.clone(),
            profile: self.profile.clone(),
        }
    }
}

/// `r` with `r^root == k`, if it exists.
fn exact_root(k: usize, root: u32) -> Option<usize> {
    let guess = (k as f64).powf(1.0 / root as f64).round() as usize;
    (guess.saturating_sub(1)..=guess + 1).find(|r| r.checked_pow(root) == Some(k))
}

/// Uniformly random size-`k` subset of `[0, n)`, sorted.
pub fn sample_support<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<IndexSet> {
    if k > n {
        return Err(Error::invalid(format!("support size {k} exceeds n = {n}")));
    }
    Ok(IndexSet::from_unsorted(index::sample(rng, n, k).into_vec()))
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * TAU)
}

/// Squared magnitudes (unit total energy) of the first fixed table:
/// one entry holding `1/sqrt(k)`, the next `sqrt(k) - 1` sharing
/// `k^{-1/6} - k^{-1/2}`, the rest sharing `1 - k^{-1/6}`.
pub fn example1_squared_magnitudes(k: usize) -> Result<Vec<f64>> {
    let r6 = exact_root(k, 6).ok_or_else(|| Error::invalid("k must be a perfect sixth power"))?;
    let sq = r6 * r6 * r6;
    let (kf, sqf, r6f) = (k as f64, sq as f64, r6 as f64);
    let mut out = Vec::with_capacity(k);
    out.push(1.0 / sqf);
    for _ in 1..sq {
        out.push((1.0 / r6f - 1.0 / sqf) / (sqf - 1.0));
    }
    for _ in sq..k {
        out.push((1.0 - 1.0 / r6f) / (kf - sqf));
    }
    Ok(out)
}

/// Squared magnitudes (unit total energy) of the second fixed table:
/// `k^{1/4}` entries of `k^{-3/4}`, then `sqrt(k) - k^{1/4}` sharing
/// `k^{-1/3} - k^{-1/2}`, the rest sharing `1 - k^{-1/3}`.
pub fn example2_squared_magnitudes(k: usize) -> Result<Vec<f64>> {
    let r4 = exact_root(k, 4).ok_or_else(|| Error::invalid("k must be a perfect fourth power"))?;
    let sq = r4 * r4;
    let (kf, sqf, r4f) = (k as f64, sq as f64, r4 as f64);
    let c3 = kf.cbrt();
    let mut out = Vec::with_capacity(k);
    for _ in 0..r4 {
        out.push(1.0 / (r4f * r4f * r4f));
    }
    for _ in r4..sq {
        out.push((1.0 / c3 - 1.0 / sqf) / (sqf - r4f));
    }
    for _ in sq..k {
        out.push((1.0 - 1.0 / c3) / (kf - sqf));
    }
    Ok(out)
}

/// Draws a signal according to `spec`.
///
/// The support is drawn first, then the nonzero values. Magnitude-table models
/// (`exp_decay`, `example1`, `example2`) place their sorted magnitudes on the
/// support in a random order with independent uniform phases.
pub fn generate<R: Rng + ?Sized>(spec: &SignalModelSpec, rng: &mut R) -> Result<SparseSignal> {
    spec.validate()?;
    let support = sample_support(spec.n, spec.k, rng)?;
    let values: Vec<Complex64> = match spec.model {
        SignalModel::Gaussian => (0..spec.k)
            .map(|_| loop {
                let v = complex_normal(rng);
                if v.re != 0.0 || v.im != 0.0 {
                    break v;
                }
            })
            .collect(),
        SignalModel::Binary => vec![Complex64::new(1.0, 0.0); spec.k],
        SignalModel::ExpDecay | SignalModel::Example1 | SignalModel::Example2 => {
            let sq = match spec.model {
                SignalModel::ExpDecay => (0..spec.k).map(|i| spec.decay.powi(i as i32)).collect(),
                SignalModel::Example1 => example1_squared_magnitudes(spec.k)?,
                _ => example2_squared_magnitudes(spec.k)?,
            };
            let mut mags: Vec<f64> = sq.into_iter().map(f64::sqrt).collect();
            mags.shuffle(rng);
            mags.into_iter().map(|m| random_phase(rng) * m).collect()
        }
    };
    let energy: f64 = values.iter().map(|c| c.norm_sqr()).sum();
    let scale = spec.target_norm / energy.sqrt();
    let mut x = vec![Complex64::new(0.0, 0.0); spec.n];
    for (&j, v) in support.iter().zip(values) {
        x[j] = v * scale;
    }
    let vector = ComplexVec::new(x)?;
    let profile = magnitude_profile(&vector)?;
    Ok(SparseSignal {
        vector,
        support,
        profile,
    })
}
