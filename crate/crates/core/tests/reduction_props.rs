mod common;

use std::collections::BTreeMap;

use brauer_core::reduction::{
    choose_b, congruent_b, connecting_trace, is_b_reduced, reduce, reduced_from_invariant, reduction_target,
};
use brauer_core::{Abacus, OddPrime, Partition};
use proptest::prelude::*;

fn prime(p: u32) -> OddPrime {
    OddPrime::new(p).unwrap()
}

fn pp(s: &str) -> Partition {
    s.parse().unwrap()
}

/// Smallest `b >= floor` in the same residue class mod `p` leaving three beads on runner 0.
fn enough_beads(lambda: &Partition, p: u32, floor: usize) -> usize {
    let mut b = floor.max(lambda.len());
    while Abacus::from_partition(lambda, prime(p), b).unwrap().runner_counts()[0] < 3 {
        b += p as usize;
    }
    b
}

#[test]
fn reduced_examples() {
    let ab = |qs: &[u32]| Abacus::from_positions(prime(5), qs.iter().copied()).unwrap();
    assert!(is_b_reduced(&ab(&[0, 1, 2, 10])));
    assert!(is_b_reduced(&ab(&[0, 1, 2, 5])));
    assert!(!is_b_reduced(&ab(&[0, 1, 2, 15])));
    assert!(!is_b_reduced(&ab(&[0, 1, 3])));
    let err = reduce(&pp("5,4"), prime(5), 10).unwrap_err().to_string();
    assert!(err.contains("b = 15"), "{err}");
}

#[test]
fn bead_count_choice() {
    let b = choose_b(&pp("5,4"), &pp("9,4,4"), 2, prime(5)).unwrap();
    assert_eq!(b % 5, 0);
    assert!(b >= 17);
    assert!(congruent_b(10, 5, prime(5)).is_err());
    for delta in 1..7 {
        let b = congruent_b(3, delta, prime(7)).unwrap() as i64;
        assert_eq!((2 * b - 2 + delta).rem_euclid(7), 0);
    }
}

#[test]
fn reduced_form_is_unique_up_to_12() {
    for p in [3u32, 5] {
        let all = Partition::all_up_to(12);
        let b = all.iter().map(|x| enough_beads(x, p, 12)).max().unwrap();
        // Grow b in steps of p until every partition has three runner-0 beads.
        let b = (0..)
            .map(|k| b + k * p as usize)
            .find(|&b| all.iter().all(|x| Abacus::from_partition(x, prime(p), b).unwrap().runner_counts()[0] >= 3))
            .unwrap();
        let mut by_target: BTreeMap<Vec<u32>, _> = BTreeMap::new();
        for x in &all {
            let (end, _) = reduce(x, prime(p), b).unwrap();
            assert_eq!(end, reduction_target(x, prime(p), b).unwrap());
            let inv = Abacus::from_partition(x, prime(p), b).unwrap().orbit_invariant();
            let prev = by_target.entry(end.occupied()).or_insert_with(|| inv.clone());
            assert_eq!(prev, &inv, "p={p}: {x} shares a reduced form with a different invariant");
        }
    }
}

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn reduction_keeps_the_invariant_at_every_step(
        lambda in common::partition_strategy(8, 8),
        p in prop::sample::select(vec![3u32, 5, 7]),
        extra in 0usize..8,
    ) {
        let b = enough_beads(&lambda, p, lambda.len() + extra);
        let start = Abacus::from_partition(&lambda, prime(p), b).unwrap();
        let (end, trace) = reduce(&lambda, prime(p), b).unwrap();
        let states = trace.replay(&start).unwrap();
        for s in &states {
            prop_assert_eq!(s.orbit_invariant(), start.orbit_invariant());
        }
        prop_assert_eq!(states.last().unwrap(), &end);
        prop_assert!(is_b_reduced(&end));
        prop_assert_eq!(&reduced_from_invariant(prime(p), &start.orbit_invariant()).unwrap(), &end);

        // The target is a fixed point.
        let (again, empty) = reduce(&end.to_partition(), prime(p), b).unwrap();
        prop_assert_eq!(again, end.clone());
        prop_assert!(empty.is_empty());

        // Replaying the inverse word from the end returns to the start.
        let back = trace.inverse(&start).unwrap();
        prop_assert_eq!(back.end_state(&end).unwrap(), start);
    }

    #[test]
    fn connecting_traces_join_equal_invariants(
        lambda in common::partition_strategy(5, 6),
        mu in common::partition_strategy(5, 6),
        p in prop::sample::select(vec![3u32, 5]),
        delta in 1i64..5,
    ) {
        prop_assume!(delta % p as i64 != 0);
        let b = choose_b(&lambda, &mu, delta, prime(p)).unwrap();
        let inv = |x: &Partition| Abacus::from_partition(x, prime(p), b).unwrap().orbit_invariant();
        match connecting_trace(&lambda, &mu, delta, prime(p)) {
            Ok(trace) => {
                prop_assert_eq!(inv(&lambda), inv(&mu));
                let start = Abacus::from_partition(&lambda, prime(p), b).unwrap();
                prop_assert_eq!(trace.end_state(&start).unwrap().to_partition(), mu);
            }
            Err(_) => prop_assert_ne!(inv(&lambda), inv(&mu)),
        }
    }
}
