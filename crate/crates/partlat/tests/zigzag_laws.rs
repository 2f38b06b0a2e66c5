//! Exhaustive laws over the zigzag configuration space for lengths
//! m ∈ {1, 3, 5}: 260 legal id-quadruples in total (every necktie, every
//! pin vector). Term-built generation is checked on all of them, full
//! closures cross-check the small lengths, and the lock-and-key behaviour
//! of the walking terms is verified pair-exhaustively.

mod common;

use partlat::closure::{close, generates, ClosureOptions};
use partlat::context::LatticeContext;
use partlat::counting::bell_u64;
use partlat::term::TermPool;
use partlat::zigzag::{
    build_configuration, make_f_term, verify_generation_via_terms, gets_through, ETermBuilder,
    IdQuadruple,
};

use common::all_quadruples;

fn sweep(lengths: &[usize]) -> Vec<IdQuadruple> {
    lengths.iter().flat_map(|&m| all_quadruples(m)).collect()
}

#[test]
fn the_configuration_space_has_the_expected_size() {
    assert_eq!(all_quadruples(1).len(), 4);
    assert_eq!(all_quadruples(3).len(), 32);
    assert_eq!(all_quadruples(5).len(), 224);
}

#[test]
fn every_configuration_generates_via_its_terms() {
    for phi in sweep(&[1, 3, 5]) {
        assert!(
            verify_generation_via_terms(&phi).unwrap(),
            "terms failed for {phi}"
        );
    }
}

#[test]
fn full_closures_confirm_generation_for_the_tabulated_lengths() {
    // Lengths 1 and 3 live on 5 to 8 points, small enough to close fully:
    // the four generators must reach every one of the bell(n) elements.
    let opts = ClosureOptions::default();
    for phi in sweep(&[1, 3]) {
        let config = build_configuration(&phi).unwrap();
        let n = config.n();
        let ctx = LatticeContext::full_equivalence(n).unwrap();
        let mu = config.generator_elts();
        let set = close(&mu, &ctx, &opts).unwrap();
        assert_eq!(
            set.len() as u64,
            bell_u64(n).unwrap(),
            "closure of {phi} missed part of Equ({n})"
        );
        assert!(generates(&mu, &ctx, &opts).unwrap());
    }
}

#[test]
fn projection_terms_recover_the_generators() {
    for phi in sweep(&[1, 3]) {
        let config = build_configuration(&phi).unwrap();
        let mu = config.generator_elts();
        let mut pool = TermPool::new();
        let projections = ETermBuilder::new(&mut pool)
            .projection_terms(&phi)
            .unwrap();
        let values = pool.eval_batch(&projections.as_array(), &mu).unwrap();
        assert_eq!(values, mu, "projections disagree for {phi}");
    }
}

#[test]
fn equal_length_keys_get_through_exactly_when_their_pins_fit() {
    // For equal zigzag lengths the walking term of the key reaches the far
    // end of the lock's zigzag if and only if the key's pin vector is
    // componentwise below the lock's. Checked over every ordered pair of
    // configurations for each length.
    for m in [1usize, 3, 5] {
        let configs = all_quadruples(m);
        for lock in &configs {
            for key in &configs {
                let want = key.z().leq(lock.z()).unwrap();
                let got = gets_through(key, lock).unwrap();
                assert_eq!(
                    got, want,
                    "key {key} against lock {lock}: got {got}, pins say {want}"
                );
            }
        }
    }
}

#[test]
fn a_one_pin_never_opens_a_zero_lock_at_any_walking_step() {
    // When the lock's pin vector starts with 0 and the key's with 1, not a
    // single walking term of the key makes any progress: every f'_i stays
    // short of the far end, across all length combinations.
    let locks: Vec<IdQuadruple> = sweep(&[1, 3, 5])
        .into_iter()
        .filter(|phi| phi.z().get(0) == 0)
        .collect();
    let keys: Vec<IdQuadruple> = sweep(&[1, 3, 5])
        .into_iter()
        .filter(|phi| phi.z().get(0) == 1)
        .collect();
    assert_eq!(locks.len(), 130);
    assert_eq!(keys.len(), 130);

    // Walking terms depend only on the key, so build each key's ladder once.
    let mut pool = TermPool::new();
    let ladders: Vec<Vec<partlat::term::Term>> = keys
        .iter()
        .map(|key| {
            (0..=key.m() + 1)
                .map(|i| make_f_term(&mut pool, key, i).unwrap())
                .collect()
        })
        .collect();

    for lock in &locks {
        let config = build_configuration(lock).unwrap();
        let mu = config.generator_elts();
        let far_end = config.edge_atom(lock.m() + 1).unwrap();
        for (key, ladder) in keys.iter().zip(&ladders) {
            let values = pool.eval_batch(ladder, &mu).unwrap();
            for (i, value) in values.iter().enumerate() {
                let reached = far_end
                    .leq(value.as_part().expect("partition context"))
                    .unwrap();
                assert!(
                    !reached,
                    "walking term {i} of key {key} opened lock {lock}"
                );
            }
        }
    }
}

#[test]
fn necktie_free_counterparts_share_their_labels() {
    for phi in sweep(&[3, 5]) {
        let bare = phi.necktie_free();
        assert!(bare.trivial_necktie());
        assert_eq!(bare.m(), phi.m());
        assert_eq!(bare.z().as_slice(), phi.z().as_slice());
        for i in 0..=phi.k() {
            assert_eq!(bare.label_a(i), phi.label_a(i));
        }
        for i in 0..phi.k() {
            assert_eq!(bare.label_b(i), phi.label_b(i));
        }
        // Only the c vertex moves: it folds onto b_1 once the necktie is
        // trivial, which shrinks the ground set by one for proper neckties.
        assert_eq!(bare.label_c(), bare.label_b(1));
        if phi.trivial_necktie() {
            assert_eq!(bare.n_elements(), phi.n_elements());
        } else {
            assert_eq!(bare.n_elements() + 1, phi.n_elements());
        }
    }
}
