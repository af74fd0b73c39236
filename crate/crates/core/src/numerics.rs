//! Vector helpers, the phase-invariant distance, the structure function and the
//! objective used to choose how many indices the first selection step keeps.

use std::cmp::Ordering;
use std::ops::Deref;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex vector with at least one entry, all finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("complex vector must have length >= 1"));
        }
        if let Some(i) = entries.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid(format!("non-finite entry at index {i}")));
        }
        Ok(ComplexVec(entries))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.0)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Indices of the nonzero entries.
    pub fn support(&self) -> IndexSet {
        IndexSet(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
                .map(|(i, _)| i)
                .collect(),
        )
    }
}

impl Deref for ComplexVec {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

/// Strictly increasing list of indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("index set must be strictly increasing"));
        }
        Ok(IndexSet(indices))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet(indices)
    }

    pub fn full(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn intersection_len(&self, other: &IndexSet) -> usize {
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        count
    }

    pub fn is_superset_of(&self, other: &IndexSet) -> bool {
        self.intersection_len(other) == other.len()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

impl Deref for IndexSet {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Squared magnitudes of a signal sorted in descending order.
///
/// Prefix sums are cached; `total_energy` is the last prefix sum, so the
/// structure function is exactly 1 once `p` reaches the number of nonzeros.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnitudeProfile {
    sorted_sq_mags: Vec<f64>,
    prefix: Vec<f64>,
}

impl MagnitudeProfile {
    /// Builds a profile from arbitrary non-negative squared magnitudes.
    pub fn from_squared_magnitudes(mut sq: Vec<f64>) -> Result<Self> {
        if sq.is_empty() {
            return Err(Error::invalid("profile needs at least one entry"));
        }
        if sq.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid("squared magnitudes must be finite and >= 0"));
        }
        sq.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let prefix: Vec<f64> = sq
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        if *prefix.last().unwrap() <= 0.0 {
            return Err(Error::invalid("signal has zero energy"));
        }
        Ok(MagnitudeProfile {
            sorted_sq_mags: sq,
            prefix,
        })
    }

    pub fn sorted_sq_mags(&self) -> &[f64] {
        &self.sorted_sq_mags
    }

    pub fn total_energy(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    /// Energy of the `p` largest entries.
    pub fn top_energy(&self, p: usize) -> f64 {
        self.prefix[p - 1]
    }

    pub fn len(&self) -> usize {
        self.sorted_sq_mags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_sq_mags.is_empty()
    }

    pub fn nonzeros(&self) -> usize {
        self.sorted_sq_mags.iter().take_while(|v| **v > 0.0).count()
    }
}

/// Which sample-complexity objective selects `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PVariant {
    /// `max{p^2 s^2(p), k s(p)}` over `p in [k]`.
    Theorem1,
    /// `max{p^2 s^2(p), sqrt(k) s^2(p), k s(p)}` over `p in [ceil(sqrt k)]`.
    Corollary3,
}

impl PVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            PVariant::Theorem1 => "theorem1",
            PVariant::Corollary3 => "corollary3",
        }
    }

    /// Largest admissible `p` for sparsity `k`.
    pub fn max_p(self, k: usize) -> usize {
        match self {
            PVariant::Theorem1 => k,
            PVariant::Corollary3 => ceil_sqrt(k),
        }
    }
}

pub fn ceil_sqrt(k: usize) -> usize {
    let mut r = (k as f64).sqrt() as usize;
    while r * r > k {
        r -= 1;
    }
    while r * r < k {
        r += 1;
    }
    r
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// `u^* v`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn check_len(u: &[Complex64], v: &[Complex64]) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(())
}

/// `min_phi ||u - e^{j phi} v||`, via `||u||^2 + ||v||^2 - 2|u^* v|` clamped at 0.
pub fn dist(u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    check_len(u, v)?;
    let radicand = norm_sqr(u) + norm_sqr(v) - 2.0 * inner(u, v).norm();
    Ok(radicand.max(0.0).sqrt())
}

fn ground_truth_norm(x: &[Complex64]) -> Result<f64> {
    let nx = norm_sqr(x).sqrt();
    if nx <= 0.0 {
        return Err(Error::invalid("ground truth has zero norm"));
    }
    Ok(nx)
}

/// Phase-aligned relative error `dist(z, x) / ||x||`.
pub fn relative_error(z: &[Complex64], x: &[Complex64]) -> Result<f64> {
    check_len(z, x)?;
    let nx = ground_truth_norm(x)?;
    Ok(dist(z, x)? / nx)
}

/// Unaligned `||z - x|| / ||x||`.
pub fn raw_relative_error(z: &[Complex64], x: &[Complex64]) -> Result<f64> {
    check_len(z, x)?;
    let nx = ground_truth_norm(x)?;
    let d: f64 = z.iter().zip(x).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok(d.sqrt() / nx)
}

pub fn magnitude_profile(x: &[Complex64]) -> Result<MagnitudeProfile> {
    MagnitudeProfile::from_squared_magnitudes(x.iter().map(|c| c.norm_sqr()).collect())
}

/// `s(p) = ||x||^2 / sum_{j<=p} |x_(j)|^2` for `1 <= p <= n`.
pub fn structure_function(profile: &MagnitudeProfile, p: usize) -> Result<f64> {
    if p == 0 || p > profile.len() {
        return Err(Error::invalid(format!(
            "p = {p} outside [1, {}]",
            profile.len()
        )));
    }
    Ok(profile.total_energy() / profile.top_energy(p))
}

/// Indices of the `k` largest values, ties to the smaller index, returned
/// ascending.
pub fn top_k_indices(values: &[f64], k: usize) -> Result<IndexSet> {
    if k == 0 || k > values.len() {
        return Err(Error::invalid(format!(
            "k = {k} outside [1, {}]",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("top-k input contains non-finite values"));
    }
    let by_rank = |&i: &usize, &j: &usize| {
        values[j]
            .partial_cmp(&values[i])
            .unwrap()
            .then_with(|| i.cmp(&j))
    };
    let mut idx: Vec<usize> = (0..values.len()).collect();
    if k < idx.len() {
        idx.select_nth_unstable_by(k - 1, by_rank);
        idx.truncate(k);
    }
    idx.sort_unstable();
    Ok(IndexSet(idx))
}

fn check_p_range(profile: &MagnitudeProfile, k: usize, p: usize, variant: PVariant) -> Result<()> {
    if k == 0 || k > profile.len() {
        return Err(Error::invalid(format!(
            "k = {k} outside [1, {}]",
            profile.len()
        )));
    }
    let hi = variant.max_p(k);
    if p == 0 || p > hi {
        return Err(Error::invalid(format!(
            "p = {p} outside [1, {hi}] for {}",
            variant.as_str()
        )));
    }
    Ok(())
}

/// Sample-complexity objective for a given `p` (without the `log n` factor).
pub fn p_objective(
    profile: &MagnitudeProfile,
    k: usize,
    p: usize,
    variant: PVariant,
) -> Result<f64> {
    check_p_range(profile, k, p, variant)?;
    let s = structure_function(profile, p)?;
    let pf = p as f64;
    let kf = k as f64;
    let base = (pf * pf * s * s).max(kf * s);
    Ok(match variant {
        PVariant::Theorem1 => base,
        PVariant::Corollary3 => base.max(kf.sqrt() * s * s),
    })
}

/// Exhaustive argmin of [`p_objective`]; the smallest `p` wins ties.
pub fn p_opt(profile: &MagnitudeProfile, k: usize, variant: PVariant) -> Result<usize> {
    check_p_range(profile, k, 1, variant)?;
    let mut best = (1, p_objective(profile, k, 1, variant)?);
    for p in 2..=variant.max_p(k) {
        let obj = p_objective(profile, k, p, variant)?;
        if obj < best.1 {
            best = (p, obj);
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gesp_oracle as oracle;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example2_profile() -> MagnitudeProfile {
        // k = 16: entries 1..2 -> 1/8, 3..4 -> (16^{-1/3} - 1/4)/2, 5..16 -> (1 - 16^{-1/3})/12
        let c3 = 16f64.powf(-1.0 / 3.0);
        let mut sq = vec![1.0 / 8.0; 2];
        sq.extend(std::iter::repeat_n((c3 - 0.25) / 2.0, 2));
        sq.extend(std::iter::repeat_n((1.0 - c3) / 12.0, 12));
        MagnitudeProfile::from_squared_magnitudes(sq).unwrap()
    }

    #[test]
    fn dist_trivial_cases() {
        assert!(dist(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 1.0), c(0.0, 0.0)]).unwrap() < 1e-15);
        let d = dist(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dist_matches_phase_grid() {
        let u = [c(3.0, 0.0), c(0.0, 4.0)];
        let v = [c(1.0, 0.0), c(1.0, 0.0)];
        let grid = oracle::phase_grid_dist(&u, &v, 1_000_000);
        assert!((dist(&u, &v).unwrap() - grid).abs() <= 1e-6);
    }

    #[test]
    fn dist_length_mismatch() {
        assert!(matches!(
            dist(&[c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn relative_error_cases() {
        let x = vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 0.0)];
        assert!(relative_error(&x, &x).unwrap() < 1e-15);
        let rot = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        let z: Vec<_> = x.iter().map(|e| e * rot).collect();
        assert!(relative_error(&z, &x).unwrap() < 1e-7);
        assert!(raw_relative_error(&z, &x).unwrap() > 0.5);
        let zero = vec![c(0.0, 0.0); 3];
        assert!((relative_error(&zero, &x).unwrap() - 1.0).abs() < 1e-15);
        assert!(relative_error(&x, &zero).is_err());
    }

    #[test]
    fn profile_examples() {
        let p = magnitude_profile(&[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(p.sorted_sq_mags(), &[4.0, 1.0, 0.0]);
        assert_eq!(p.total_energy(), 5.0);
        let p = magnitude_profile(&[c(0.0, 3.0), c(-4.0, 0.0)]).unwrap();
        assert_eq!(p.sorted_sq_mags(), &[16.0, 9.0]);
        assert_eq!(p.total_energy(), 25.0);
        assert!(magnitude_profile(&[c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn structure_function_example2() {
        let p = example2_profile();
        assert!((p.total_energy() - 1.0).abs() < 1e-15);
        assert!((structure_function(&p, 1).unwrap() - 8.0).abs() < 1e-12);
        assert!((structure_function(&p, 2).unwrap() - 4.0).abs() < 1e-12);
        assert!((structure_function(&p, 4).unwrap() - 16f64.cbrt()).abs() < 1e-10);
        assert_eq!(structure_function(&p, 16).unwrap(), 1.0);
        assert!(structure_function(&p, 0).is_err());
        assert!(structure_function(&p, 17).is_err());
    }

    #[test]
    fn top_k_examples() {
        assert_eq!(top_k_indices(&[0.3, 0.9, 0.9, 0.1], 2).unwrap().as_slice(), &[1, 2]);
        assert_eq!(top_k_indices(&[5.0, 1.0, 4.0], 1).unwrap().as_slice(), &[0]);
        assert!(top_k_indices(&[1.0], 2).is_err());
        assert!(top_k_indices(&[1.0, f64::NAN], 1).is_err());
    }

    #[test]
    fn top_k_matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let v: Vec<f64> = (0..1000).map(|_| rng.random::<f64>()).collect();
            assert_eq!(top_k_indices(&v, 10).unwrap().as_slice(), oracle::sort_top_k(&v, 10));
        }
        // heavy ties
        let v: Vec<f64> = (0..1000).map(|_| rng.random_range(0..5) as f64).collect();
        assert_eq!(top_k_indices(&v, 37).unwrap().as_slice(), oracle::sort_top_k(&v, 37));
    }

    #[test]
    fn p_objective_example2() {
        let p = example2_profile();
        let obj = |q| p_objective(&p, 16, q, PVariant::Theorem1).unwrap();
        assert!((obj(1) - 128.0).abs() < 1e-9);
        assert!((obj(2) - 64.0).abs() < 1e-9);
        assert!((obj(4) - 16.0 * 16f64.powf(2.0 / 3.0)).abs() < 1e-9);
        assert!((obj(4) - 101.59).abs() < 0.01);
        assert_eq!(p_opt(&p, 16, PVariant::Theorem1).unwrap(), 2);
        assert!(p_objective(&p, 16, 17, PVariant::Theorem1).is_err());
        assert!(p_objective(&p, 16, 5, PVariant::Corollary3).is_err());
        assert!(p_objective(&p, 16, 4, PVariant::Corollary3).is_ok());
    }

    #[test]
    fn p_opt_flat_and_spike() {
        let flat = MagnitudeProfile::from_squared_magnitudes(vec![1.0; 8]).unwrap();
        for q in 1..=8 {
            let obj = p_objective(&flat, 8, q, PVariant::Theorem1).unwrap();
            assert!((obj - 64.0).abs() < 1e-9, "p = {q}: {obj}");
        }
        assert_eq!(p_opt(&flat, 8, PVariant::Theorem1).unwrap(), 1);

        let mut sq = vec![0.0; 9];
        sq[0] = 1.0;
        let spike = MagnitudeProfile::from_squared_magnitudes(sq).unwrap();
        for q in 1..=9 {
            let obj = p_objective(&spike, 9, q, PVariant::Theorem1).unwrap();
            assert_eq!(obj, ((q * q) as f64).max(9.0));
        }
        assert_eq!(p_opt(&spike, 9, PVariant::Theorem1).unwrap(), 1);
    }

    #[test]
    fn ceil_sqrt_values() {
        let got: Vec<usize> = [1, 2, 4, 5, 9, 10, 16, 17].iter().map(|&k| ceil_sqrt(k)).collect();
        assert_eq!(got, vec![1, 2, 2, 3, 3, 4, 4, 5]);
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(vec![0, 2, 5]).is_ok());
        assert!(IndexSet::new(vec![0, 2, 2]).is_err());
        assert!(IndexSet::new(vec![3, 1]).is_err());
        let a = IndexSet::from_unsorted(vec![4, 1, 1, 3]);
        assert_eq!(a.as_slice(), &[1, 3, 4]);
        let b = IndexSet::new(vec![1, 4]).unwrap();
        assert_eq!(a.intersection_len(&b), 2);
        assert!(a.is_superset_of(&b));
        assert!(!b.is_superset_of(&a));
    }

    #[test]
    fn complex_vec_rejects_bad_input() {
        assert!(ComplexVec::new(vec![]).is_err());
        assert!(ComplexVec::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexVec::new(vec![c(1.0, f64::INFINITY)]).is_err());
    }

    fn arb_cvec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), len)
            .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn dist_phase_invariant_and_symmetric(
            (u, v) in (1usize..64).prop_flat_map(|n| (arb_cvec(n), arb_cvec(n))),
            phi in 0.0f64..std::f64::consts::TAU,
        ) {
            let rot = Complex64::from_polar(1.0, phi);
            let ur: Vec<_> = u.iter().map(|e| e * rot).collect();
            let scale = norm_sqr(&u).sqrt() + norm_sqr(&v).sqrt();
            let d = dist(&u, &v).unwrap();
            prop_assert!((dist(&ur, &v).unwrap() - d).abs() <= 1e-10 * scale.max(1.0));
            prop_assert_eq!(d, dist(&v, &u).unwrap());
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn dist_agrees_with_grid(
            (u, v) in (1usize..16).prop_flat_map(|n| (arb_cvec(n), arb_cvec(n))),
        ) {
            let grid = gesp_oracle::phase_grid_dist(&u, &v, 1_000_000);
            let d = dist(&u, &v).unwrap();
            // Grid spacing 2pi/1e6 bounds the excess by |u^* v| (dphi)^2 / 2.
            prop_assert!(grid >= d - 1e-9);
            prop_assert!((grid - d).abs() <= 1e-6);
        }
    }

    proptest! {

        #[test]
        fn structure_function_bounds(sq in prop::collection::vec(0.0f64..10.0, 1..64)) {
            prop_assume!(sq.iter().any(|v| *v > 0.0));
            let prof = MagnitudeProfile::from_squared_magnitudes(sq).unwrap();
            let k = prof.nonzeros();
            let kf = k as f64;
            let mut prev_s = f64::INFINITY;
            let mut prev_ps = 0.0;
            for p in 1..=k {
                let s = structure_function(&prof, p).unwrap();
                let pf = p as f64;
                prop_assert!(s >= 1.0 - 1e-12);
                prop_assert!(s <= kf / pf * (1.0 + 1e-12));
                prop_assert!(pf * s >= pf * (1.0 - 1e-12));
                prop_assert!(pf * s <= kf * (1.0 + 1e-12));
                prop_assert!(s <= prev_s);
                prop_assert!(pf * s >= prev_ps * (1.0 - 1e-12));
                prev_s = s;
                prev_ps = pf * s;
            }
            prop_assert_eq!(structure_function(&prof, prof.len()).unwrap(), 1.0);
        }

        #[test]
        fn p_opt_attains_scan_minimum(sq in prop::collection::vec(0.001f64..10.0, 1..40)) {
            let prof = MagnitudeProfile::from_squared_magnitudes(sq).unwrap();
            let k = prof.len();
            for variant in [PVariant::Theorem1, PVariant::Corollary3] {
                let best = p_opt(&prof, k, variant).unwrap();
                let at_best = p_objective(&prof, k, best, variant).unwrap();
                for p in 1..=variant.max_p(k) {
                    let s = prof.total_energy() / prof.sorted_sq_mags()[..p].iter().sum::<f64>();
                    let mut obj = ((p * p) as f64 * s * s).max(k as f64 * s);
                    if variant == PVariant::Corollary3 {
                        obj = obj.max((k as f64).sqrt() * s * s);
                    }
                    prop_assert!(at_best <= obj * (1.0 + 1e-12));
                    if p < best {
                        prop_assert!(p_objective(&prof, k, p, variant).unwrap() > at_best);
                    }
                }
            }
        }
    }
}
