//! The closure engine against a deliberately naive fixpoint oracle, on
//! random generating sets small enough for the oracle to finish. Covers the
//! dense tabulated path, the explicit-context path, product contexts, the
//! early-exit shortcut, the element cap, and witness-term replay.

mod common;

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use partlat::closure::{close, generates, order_type, ClosureOptions, OrderType};
use partlat::context::{Elt, LatticeContext};
use partlat::counting::bell_u64;
use partlat::partition::{enumerate_partitions, Partition};
use partlat::term::{term_for_witness, TermPool};
use partlat::Error;

use common::naive_closure;

fn as_elts(parts: &[Partition]) -> Vec<Elt> {
    parts.iter().cloned().map(Elt::Part).collect()
}

fn rgs_set(parts: &[Partition]) -> BTreeSet<Vec<u8>> {
    parts.iter().map(|p| p.rgs().to_vec()).collect()
}

fn closure_rgs_set(elts: &[Elt]) -> BTreeSet<Vec<u8>> {
    elts.iter()
        .map(|e| e.as_part().expect("partition context").rgs().to_vec())
        .collect()
}

#[test]
fn dense_closure_matches_the_naive_fixpoint_on_equ4() {
    let universe = enumerate_partitions(4).unwrap();
    let ctx = LatticeContext::full_equivalence(4).unwrap();
    let opts = ClosureOptions::default();
    let mut rng = StdRng::seed_from_u64(0x0c10_05e1);
    for round in 0..300 {
        let size = rng.gen_range(1..=4);
        let gens: Vec<Partition> = (0..size)
            .map(|_| universe[rng.gen_range(0..universe.len())].clone())
            .collect();
        let naive = naive_closure(&gens);
        let fast = close(&as_elts(&gens), &ctx, &opts).unwrap();
        assert_eq!(
            closure_rgs_set(&fast.elements),
            rgs_set(&naive),
            "round {round}, generators {gens:?}"
        );
    }
}

#[test]
fn dense_closure_matches_the_naive_fixpoint_on_equ5() {
    let universe = enumerate_partitions(5).unwrap();
    let ctx = LatticeContext::full_equivalence(5).unwrap();
    let opts = ClosureOptions::default();
    let bell5 = bell_u64(5).unwrap() as usize;
    let mut rng = StdRng::seed_from_u64(0x0c10_05e2);
    for _ in 0..60 {
        let gens: Vec<Partition> = (0..4)
            .map(|_| universe[rng.gen_range(0..universe.len())].clone())
            .collect();
        let naive = naive_closure(&gens);
        let fast = close(&as_elts(&gens), &ctx, &opts).unwrap();
        assert_eq!(fast.len(), naive.len());
        let elts = as_elts(&gens);
        assert_eq!(
            generates(&elts, &ctx, &opts).unwrap(),
            naive.len() == bell5,
            "generates() disagrees with the oracle on {gens:?}"
        );
    }
}

#[test]
fn explicit_and_dense_contexts_close_identically() {
    // The same sublattice problem through the generic engine: an explicit
    // context listing all of Equ(4) must behave like the tabulated one.
    let universe = enumerate_partitions(4).unwrap();
    let dense = LatticeContext::full_equivalence(4).unwrap();
    let explicit = LatticeContext::explicit(as_elts(&universe)).unwrap();
    let opts = ClosureOptions::default();
    let mut rng = StdRng::seed_from_u64(0x0c10_05e3);
    for _ in 0..80 {
        let gens: Vec<Elt> = (0..rng.gen_range(1..=4))
            .map(|_| Elt::Part(universe[rng.gen_range(0..universe.len())].clone()))
            .collect();
        let a = close(&gens, &dense, &opts).unwrap();
        let b = close(&gens, &explicit, &opts).unwrap();
        assert_eq!(closure_rgs_set(&a.elements), closure_rgs_set(&b.elements));
    }
}

#[test]
fn early_exit_answers_generation_like_the_full_run() {
    let universe = enumerate_partitions(5).unwrap();
    let ctx = LatticeContext::full_equivalence(5).unwrap();
    let plain = ClosureOptions::default();
    let shortcut = ClosureOptions {
        early_exit_on_atoms: true,
        ..ClosureOptions::default()
    };
    let mut rng = StdRng::seed_from_u64(0x0c10_05e4);
    for _ in 0..120 {
        let gens: Vec<Elt> = (0..4)
            .map(|_| Elt::Part(universe[rng.gen_range(0..universe.len())].clone()))
            .collect();
        assert_eq!(
            generates(&gens, &ctx, &shortcut).unwrap(),
            generates(&gens, &ctx, &plain).unwrap(),
            "early exit changed the verdict for {gens:?}"
        );
    }
}

#[test]
fn order_type_counts_comparable_pairs_correctly() {
    let universe = enumerate_partitions(5).unwrap();
    let ctx = LatticeContext::full_equivalence(5).unwrap();
    let mut rng = StdRng::seed_from_u64(0x0c10_05e5);
    for _ in 0..200 {
        let quad: Vec<Partition> = (0..4)
            .map(|_| universe[rng.gen_range(0..universe.len())].clone())
            .collect();
        // Distinctness is part of the order-type contract.
        if rgs_set(&quad).len() < 4 {
            continue;
        }
        let mut comparable = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if quad[i].leq(&quad[j]).unwrap() || quad[j].leq(&quad[i]).unwrap() {
                    comparable += 1;
                }
            }
        }
        let got = order_type(&as_elts(&quad), &ctx).unwrap();
        match got {
            OrderType::Antichain => assert_eq!(comparable, 0, "{quad:?}"),
            OrderType::OneOneTwo => assert_eq!(comparable, 1, "{quad:?}"),
            _ => assert!(comparable >= 2, "{quad:?} gave {got:?}"),
        }
    }
}

#[test]
fn element_cap_reports_a_closure_cap_error() {
    let ctx = LatticeContext::full_equivalence(5).unwrap();
    // Atoms generate the whole 52-element lattice, so a cap of 10 must trip.
    let gens = as_elts(&[
        Partition::atom(5, 0, 1).unwrap(),
        Partition::atom(5, 1, 2).unwrap(),
        Partition::atom(5, 2, 3).unwrap(),
        Partition::atom(5, 3, 4).unwrap(),
    ]);
    let opts = ClosureOptions {
        max_elements: Some(10),
        ..ClosureOptions::default()
    };
    match close(&gens, &ctx, &opts) {
        Err(Error::ClosureCap { cap, partial }) => {
            assert_eq!(cap, 10);
            assert!(partial >= 10, "partial size {partial}");
        }
        other => panic!("expected a closure-cap error, got {other:?}"),
    }
}

#[test]
fn witness_terms_replay_every_reached_element() {
    let universe = enumerate_partitions(4).unwrap();
    let ctx = LatticeContext::full_equivalence(4).unwrap();
    let opts = ClosureOptions {
        record_witness_terms: true,
        ..ClosureOptions::default()
    };
    let mut rng = StdRng::seed_from_u64(0x0c10_05e6);
    for _ in 0..40 {
        let gens: Vec<Elt> = (0..rng.gen_range(1..=4))
            .map(|_| Elt::Part(universe[rng.gen_range(0..universe.len())].clone()))
            .collect();
        let set = close(&gens, &ctx, &opts).unwrap();
        let steps = set.witnesses.as_ref().expect("witnesses were requested");
        assert_eq!(steps.len(), set.elements.len());
        let mut pool = TermPool::new();
        for (idx, want) in set.elements.iter().enumerate() {
            let term = term_for_witness(&mut pool, steps, idx).unwrap();
            let got = pool.eval(term, &gens).unwrap();
            assert_eq!(&got, want, "witness {idx} rebuilt the wrong element");
        }
    }
}

#[test]
fn product_closure_matches_a_componentwise_oracle() {
    let left = enumerate_partitions(3).unwrap();
    let right = enumerate_partitions(3).unwrap();
    let ctx = LatticeContext::product(vec![
        LatticeContext::full_equivalence(3).unwrap(),
        LatticeContext::full_equivalence(3).unwrap(),
    ])
    .unwrap();
    let opts = ClosureOptions::default();
    let mut rng = StdRng::seed_from_u64(0x0c10_05e7);
    for _ in 0..120 {
        let size = rng.gen_range(1..=4);
        let gens: Vec<(Partition, Partition)> = (0..size)
            .map(|_| {
                (
                    left[rng.gen_range(0..left.len())].clone(),
                    right[rng.gen_range(0..right.len())].clone(),
                )
            })
            .collect();

        // Naive componentwise fixpoint over pairs.
        let mut seen: BTreeSet<(Vec<u8>, Vec<u8>)> = BTreeSet::new();
        let mut elements: Vec<(Partition, Partition)> = Vec::new();
        for g in &gens {
            if seen.insert((g.0.rgs().to_vec(), g.1.rgs().to_vec())) {
                elements.push(g.clone());
            }
        }
        let mut next = 0;
        while next < elements.len() {
            let cur = elements[next].clone();
            next += 1;
            for i in 0..elements.len() {
                let other = elements[i].clone();
                let combos = [
                    (cur.0.meet(&other.0).unwrap(), cur.1.meet(&other.1).unwrap()),
                    (cur.0.join(&other.0).unwrap(), cur.1.join(&other.1).unwrap()),
                ];
                for c in combos {
                    if seen.insert((c.0.rgs().to_vec(), c.1.rgs().to_vec())) {
                        elements.push(c);
                    }
                }
            }
        }

        let gen_elts: Vec<Elt> = gens
            .iter()
            .map(|(a, b)| Elt::Tuple(vec![Elt::Part(a.clone()), Elt::Part(b.clone())]))
            .collect();
        let fast = close(&gen_elts, &ctx, &opts).unwrap();
        assert_eq!(fast.len(), elements.len(), "generators {gens:?}");
    }
}
