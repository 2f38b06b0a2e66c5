//! Exact counting helpers: Bell numbers, binomials, and the colexicographic
//! ranking of 4-element subsets used to checkpoint long enumerations.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `bell(n)` = number of partitions of an n-set, computed by the Bell
/// triangle. `bell(0) == 1`.
pub fn bell(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::one();
    }
    // row holds the current triangle row; the next row starts with the last
    // entry of this one.
    let mut row = vec![BigUint::one()];
    for _ in 1..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for x in &row {
            let last = next.last().unwrap().clone();
            next.push(last + x);
        }
        row = next;
    }
    row.last().unwrap().clone()
}

/// `bell(n)` as `f64`; exact for every n where the value fits 53 bits and a
/// faithful rounding beyond that.
pub fn bell_f64(n: usize) -> f64 {
    bell(n).to_f64().unwrap_or(f64::INFINITY)
}

/// `bell(n)` as `u64`, erroring once the value no longer fits.
pub fn bell_u64(n: usize) -> Result<u64> {
    bell(n)
        .to_u64()
        .ok_or_else(|| Error::Capacity(format!("bell({n}) exceeds u64")))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Binomial coefficient as `u64`, erroring on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Result<u64> {
    binomial(n, k)
        .to_u64()
        .ok_or_else(|| Error::Capacity(format!("C({n},{k}) exceeds u64")))
}

/// `C(m, 4)` as `u64`; the largest lattice we enumerate over has
/// `m = bell(9) = 21147`, whose `C(m,4)` still fits comfortably.
pub fn choose4(m: u64) -> Result<u64> {
    binomial_u64(m, 4)
}

/// Colexicographic rank of a strictly increasing 4-subset
/// `r0 < r1 < r2 < r3` of `{0..m-1}`:
/// `rank = C(r0,1) + C(r1,2) + C(r2,3) + C(r3,4)`.
///
/// Ranks run from 0 (subset `{0,1,2,3}`) to `C(m,4)-1` and enumerating by
/// ascending rank visits subsets in colex order, so a checkpoint is just the
/// next rank to process.
pub fn rank_colex4(subset: [u64; 4]) -> u64 {
    debug_assert!(subset[0] < subset[1] && subset[1] < subset[2] && subset[2] < subset[3]);
    let [r0, r1, r2, r3] = subset;
    // C(r,2), C(r,3), C(r,4) with u128 intermediates; results fit u64 for
    // every m we accept in choose4.
    let c2 = r1 * (r1 - 1) / 2;
    let c3 = ((r2 as u128) * ((r2 - 1) as u128) * ((r2 - 2) as u128) / 6) as u64;
    let c4 = ((r3 as u128) * ((r3 - 1) as u128) * ((r3 - 2) as u128) * ((r3 - 3) as u128) / 24)
        as u64;
    r0 + c2 + c3 + c4
}

/// Inverse of [`rank_colex4`]: the 4-subset with the given colex rank.
pub fn unrank_colex4(mut rank: u64) -> [u64; 4] {
    let mut out = [0u64; 4];
    for k in (1..=4u64).rev() {
        // Largest r with C(r,k) <= rank.
        let mut lo = k - 1; // C(k-1,k) = 0
        let mut hi = lo + 2;
        while c_u128(hi, k) <= rank as u128 {
            hi = hi.saturating_mul(2);
        }
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if c_u128(mid, k) <= rank as u128 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out[(k - 1) as usize] = lo;
        rank -= c_u128(lo, k) as u64;
    }
    out
}

fn c_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_small_values() {
        let expect: [u64; 10] = [1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(bell(n), BigUint::from(e), "bell({n})");
        }
    }

    #[test]
    fn bell_matches_enumeration() {
        for n in 1..=7 {
            let parts = crate::partition::enumerate_partitions(n).unwrap();
            assert_eq!(BigUint::from(parts.len()), bell(n));
        }
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(15, 4), BigUint::from(1365u32));
        assert_eq!(binomial(52, 4), BigUint::from(270725u32));
        assert_eq!(binomial(203, 4), BigUint::from(68685050u64));
        assert_eq!(binomial(877, 4), BigUint::from(24480029875u64));
        assert_eq!(binomial(4140, 4), BigUint::from(12222513708615u64));
        assert_eq!(binomial(21147, 4), BigUint::from(8330299023110190u64));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(5, 6), BigUint::zero());
    }

    #[test]
    fn colex_rank_round_trip_exhaustive() {
        // All 4-subsets of a 10-set, in colex order.
        let mut rank = 0u64;
        for r3 in 3..10u64 {
            for r2 in 2..r3 {
                for r1 in 1..r2 {
                    for r0 in 0..r1 {
                        let s = [r0, r1, r2, r3];
                        assert_eq!(rank_colex4(s), rank);
                        assert_eq!(unrank_colex4(rank), s);
                        rank += 1;
                    }
                }
            }
        }
        assert_eq!(rank, binomial_u64(10, 4).unwrap());
    }

    #[test]
    fn colex_rank_round_trip_large() {
        // Spot ranks near the top of the biggest space we index.
        let total = choose4(21147).unwrap();
        for &r in &[0, 1, total / 2, total - 2, total - 1] {
            assert_eq!(rank_colex4(unrank_colex4(r)), r);
        }
        assert_eq!(unrank_colex4(0), [0, 1, 2, 3]);
        assert_eq!(unrank_colex4(total - 1), [21143, 21144, 21145, 21146]);
    }
}
