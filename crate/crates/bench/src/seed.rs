//! Per-trial seed derivation.

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `trial_idx` at ratio `ratio_idx`. Depends only on the three
/// inputs, so trials can run in any order on any thread.
pub fn derive_seed(base: u64, ratio_idx: usize, trial_idx: usize) -> u64 {
    let h = splitmix64(base);
    let h = splitmix64(h ^ ratio_idx as u64);
    splitmix64(h ^ (trial_idx as u64).rotate_left(32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn splitmix_reference_values() {
        // First outputs of the reference generator seeded with 0: the state
        // advances by the golden gamma before each mix.
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(splitmix64(0x9E37_79B9_7F4A_7C15), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn seeds_distinct_across_grid() {
        let mut seen = HashSet::new();
        for b in [0u64, 1, 42] {
            for r in 0..20 {
                for t in 0..500 {
                    assert!(seen.insert(derive_seed(b, r, t)));
                }
            }
        }
    }

    #[test]
    fn seed_is_pure() {
        assert_eq!(derive_seed(7, 3, 11), derive_seed(7, 3, 11));
        assert_ne!(derive_seed(7, 3, 11), derive_seed(7, 11, 3));
    }
}
