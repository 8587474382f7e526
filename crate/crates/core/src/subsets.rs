//! Bitmask subset enumeration shared by the access, span-program, and audit
//! modules. Masks use bit i for party/row index i (0-based); every function
//! returns masks in ascending numeric order so downstream iteration is
//! deterministic.

/// All `k`-element subsets of `{0, .., n-1}` as bitmasks, ascending.
pub fn k_subset_masks(n: usize, k: usize) -> Vec<u64> {
    assert!(n <= 63, "subset enumeration is limited to 63 indices");
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    // Gosper's hack walks same-popcount masks in ascending order.
    let mut out = Vec::new();
    let limit: u64 = 1 << n;
    let mut mask: u64 = (1 << k) - 1;
    while mask < limit {
        out.push(mask);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    out
}

/// All subsets of `{0, .., n-1}` as bitmasks, ascending (0 through 2^n - 1).
pub fn all_masks(n: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 63, "subset enumeration is limited to 63 indices");
    0..(1u64 << n)
}

/// Indices present in a mask, ascending.
pub fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_subsets_count_and_order() {
        let s = k_subset_masks(4, 2);
        assert_eq!(s.len(), 6);
        let mut sorted = s.clone();
        sorted.sort_unstable();
        assert_eq!(s, sorted);
        for m in s {
            assert_eq!(m.count_ones(), 2);
        }
    }

    #[test]
    fn edge_cardinalities() {
        assert_eq!(k_subset_masks(3, 0), vec![0]);
        assert_eq!(k_subset_masks(3, 3), vec![0b111]);
        assert!(k_subset_masks(3, 4).is_empty());
    }

    #[test]
    fn all_masks_is_full_range() {
        assert_eq!(all_masks(3).count(), 8);
        assert_eq!(mask_indices(0b101), vec![0, 2]);
    }
}
