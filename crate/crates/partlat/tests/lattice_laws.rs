//! Property tests for the partition lattice primitives: the algebraic laws
//! every lattice must satisfy, the order/operation consistency conditions,
//! and the serialization round-trips. Partitions are generated from random
//! block assignments, so every size and shape in the range is reachable.

use proptest::prelude::*;

use partlat::partition::Partition;

fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..n, n)
        .prop_map(|assign| Partition::from_assignment(&assign).expect("assignment is total"))
}

/// A ground-set size together with partitions living on it.
fn pair() -> impl Strategy<Value = (Partition, Partition)> {
    (3usize..=7).prop_flat_map(|n| (arb_partition(n), arb_partition(n)))
}

fn triple() -> impl Strategy<Value = (Partition, Partition, Partition)> {
    (3usize..=7).prop_flat_map(|n| (arb_partition(n), arb_partition(n), arb_partition(n)))
}

fn with_permutation() -> impl Strategy<Value = (Partition, Partition, Vec<usize>)> {
    (3usize..=7).prop_flat_map(|n| {
        let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (arb_partition(n), arb_partition(n), perm)
    })
}

/// Independent join oracle: the finest partition relating `u` and `v`
/// whenever some chain of `a`/`b` relations connects them, computed by
/// repeated relabeling instead of the library's union-find.
fn join_oracle(a: &Partition, b: &Partition) -> Partition {
    let n = a.n();
    let mut label: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for u in 0..n {
            for v in 0..n {
                if (a.related(u, v) || b.related(u, v)) && label[u] != label[v] {
                    let (keep, drop) = (label[u].min(label[v]), label[u].max(label[v]));
                    for l in label.iter_mut() {
                        if *l == drop {
                            *l = keep;
                        }
                    }
                    changed = true;
                }
            }
        }
    }
    Partition::from_assignment(&label).expect("labels are total")
}

proptest! {
    #[test]
    fn meet_and_join_are_commutative((a, b) in pair()) {
        prop_assert_eq!(a.meet(&b).unwrap(), b.meet(&a).unwrap());
        prop_assert_eq!(a.join(&b).unwrap(), b.join(&a).unwrap());
    }

    #[test]
    fn meet_and_join_are_associative((a, b, c) in triple()) {
        let left = a.meet(&b).unwrap().meet(&c).unwrap();
        let right = a.meet(&b.meet(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let left = a.join(&b).unwrap().join(&c).unwrap();
        let right = a.join(&b.join(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn absorption_holds_both_ways((a, b) in pair()) {
        prop_assert_eq!(a.meet(&a.join(&b).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(a.join(&a.meet(&b).unwrap()).unwrap(), a.clone());
    }

    #[test]
    fn meet_and_join_are_idempotent((a, _b) in pair()) {
        prop_assert_eq!(a.meet(&a).unwrap(), a.clone());
        prop_assert_eq!(a.join(&a).unwrap(), a.clone());
    }

    #[test]
    fn order_and_operations_agree((a, b) in pair()) {
        let meet_is_a = a.meet(&b).unwrap() == a;
        let join_is_b = a.join(&b).unwrap() == b;
        prop_assert_eq!(a.leq(&b).unwrap(), meet_is_a);
        prop_assert_eq!(meet_is_a, join_is_b);
    }

    #[test]
    fn meet_relates_exactly_the_common_pairs((a, b) in pair()) {
        let m = a.meet(&b).unwrap();
        for u in 0..a.n() {
            for v in 0..a.n() {
                prop_assert_eq!(m.related(u, v), a.related(u, v) && b.related(u, v));
            }
        }
    }

    #[test]
    fn join_matches_the_relabeling_oracle((a, b) in pair()) {
        prop_assert_eq!(a.join(&b).unwrap(), join_oracle(&a, &b));
    }

    #[test]
    fn extremes_are_identities_and_absorbers((a, _b) in pair()) {
        let bot = Partition::bottom(a.n());
        let top = Partition::top(a.n());
        prop_assert_eq!(a.meet(&bot).unwrap(), bot.clone());
        prop_assert_eq!(a.join(&bot).unwrap(), a.clone());
        prop_assert_eq!(a.meet(&top).unwrap(), a.clone());
        prop_assert_eq!(a.join(&top).unwrap(), top);
    }

    #[test]
    fn operations_are_monotone((a, b, c) in triple()) {
        // a∧b ≤ b always, so (a∧b, b) is a comparable pair to test with.
        let lo = a.meet(&b).unwrap();
        prop_assert!(lo.meet(&c).unwrap().leq(&b.meet(&c).unwrap()).unwrap());
        prop_assert!(lo.join(&c).unwrap().leq(&b.join(&c).unwrap()).unwrap());
    }

    #[test]
    fn relabeling_is_a_lattice_automorphism((a, b, perm) in with_permutation()) {
        let pa = a.permute(&perm).unwrap();
        let pb = b.permute(&perm).unwrap();
        prop_assert_eq!(a.meet(&b).unwrap().permute(&perm).unwrap(), pa.meet(&pb).unwrap());
        prop_assert_eq!(a.join(&b).unwrap().permute(&perm).unwrap(), pa.join(&pb).unwrap());
    }

    #[test]
    fn canonical_encoding_round_trips((a, _b) in pair()) {
        let padded = a.encode_canonical(2 * a.n() + 1).unwrap();
        prop_assert_eq!(padded.len(), 2 * a.n() + 1);
        prop_assert_eq!(Partition::decode_canonical(&padded).unwrap(), a.clone());
        let rgs = a.rgs_string().unwrap();
        prop_assert_eq!(Partition::parse_rgs_string(&rgs).unwrap(), a);
    }

    #[test]
    fn block_lists_rebuild_the_partition((a, _b) in pair()) {
        let blocks = a.blocks();
        prop_assert_eq!(Partition::from_blocks(a.n(), &blocks).unwrap(), a.clone());
        // Blocks are sorted by least element and partition the ground set.
        let mut seen = vec![false; a.n()];
        let mut last_min = None;
        for block in &blocks {
            prop_assert!(!block.is_empty());
            let min = *block.iter().min().unwrap();
            prop_assert!(last_min < Some(min));
            last_min = Some(min);
            for &e in block {
                prop_assert!(!seen[e]);
                seen[e] = true;
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }
}

#[test]
fn mixed_ground_sets_are_rejected() {
    let a = Partition::bottom(4);
    let b = Partition::bottom(5);
    assert!(matches!(
        a.meet(&b),
        Err(partlat::Error::DimensionMismatch(4, 5))
    ));
    assert!(matches!(
        a.join(&b),
        Err(partlat::Error::DimensionMismatch(4, 5))
    ));
    assert!(a.leq(&b).is_err());
}
