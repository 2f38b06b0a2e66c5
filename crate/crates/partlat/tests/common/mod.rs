//! Helpers shared by the integration suites. Everything here is written
//! against the public API only and deliberately avoids the library's dense
//! closure engine, so the oracles stay independent of the code under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use partlat::bits::BitVector;
use partlat::partition::Partition;
use partlat::zigzag::IdQuadruple;

/// Every legal id-quadruple of zigzag length `m`: the trivial necktie plus
/// all proper ones `0 <= s < t <= k-1`, crossed with all `2^m` pin vectors.
pub fn all_quadruples(m: usize) -> Vec<IdQuadruple> {
    assert!(m % 2 == 1, "zigzag lengths are odd");
    let k = (m + 3) / 2;
    let mut neckties = vec![(1usize, 1usize)];
    for s in 0..k - 1 {
        for t in s + 1..k {
            neckties.push((s, t));
        }
    }
    let mut out = Vec::new();
    for &(s, t) in &neckties {
        for code in 0u32..(1u32 << m) {
            let bits: Vec<u8> = (0..m).map(|i| ((code >> i) & 1) as u8).collect();
            let z = BitVector::new(bits).expect("bits are 0/1");
            out.push(IdQuadruple::new(m, s, t, z).expect("necktie and pins are legal"));
        }
    }
    out
}

/// Fixpoint closure of a set of partitions under pairwise meet and join,
/// computed with nothing but `Partition::meet`/`Partition::join`. Quadratic
/// and slow on purpose; use only where the closure stays small.
pub fn naive_closure(generators: &[Partition]) -> Vec<Partition> {
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut elements: Vec<Partition> = Vec::new();
    for g in generators {
        if seen.insert(g.rgs().to_vec()) {
            elements.push(g.clone());
        }
    }
    // Process a growing frontier: every new element is combined with every
    // element already present (itself included via the generators).
    let mut next = 0;
    while next < elements.len() {
        let current = elements[next].clone();
        next += 1;
        for i in 0..elements.len() {
            let other = elements[i].clone();
            for combined in [current.meet(&other).unwrap(), current.join(&other).unwrap()] {
                if seen.insert(combined.rgs().to_vec()) {
                    elements.push(combined);
                }
            }
        }
    }
    elements
}
