use std::collections::BTreeSet;

use oracles::{brute_key, reduced_by_filter};
use props_engine::budget::Budget;
use props_engine::marked::enumerate_reduced;
use props_engine::profiles::ProfilePair;
use props_engine::schemes::PastingScheme;
use props_engine::Color;

const C: Color = Color(0);

fn pp(i: usize, o: usize) -> ProfilePair {
    ProfilePair::new(vec![C; i], vec![C; o])
}

/// Agreement as sets of engine keys and as sets of brute-force keys.
fn agree(scheme: &str, r: ProfilePair, s: ProfilePair, k: usize) -> usize {
    let scheme = PastingScheme::by_name(scheme).unwrap();
    let budget = Budget::default();
    let fast = enumerate_reduced(&scheme, &r, &s, k, &budget).unwrap();
    let slow = reduced_by_filter(&scheme, &r, &s, k, 1, &budget).unwrap();
    let fast_keys: BTreeSet<_> = fast.iter().map(|c| c.key.clone()).collect();
    let slow_keys: BTreeSet<_> = slow.iter().map(|m| m.key()).collect();
    assert_eq!(fast_keys, slow_keys, "{} {r:?} {s:?} k={k}", scheme.name());
    let fast_brute: BTreeSet<_> = fast.iter().map(|c| brute_key(&c.marked.graph, &c.marked.ds)).collect();
    let slow_brute: BTreeSet<_> = slow.iter().map(|m| brute_key(&m.graph, &m.ds)).collect();
    assert_eq!(fast_brute, slow_brute);
    assert_eq!(fast.len(), slow.len());
    fast.len()
}

#[test]
fn unital_linear() {
    let counts: Vec<usize> = (1..=3).map(|k| agree("unital-linear", pp(1, 1), pp(1, 1), k)).collect();
    eprintln!("linear {counts:?}");
}

#[test]
fn unital_trees() {
    for n in 2..=3 {
        let counts: Vec<usize> = (1..=2).map(|k| agree("unital-trees", pp(n, 1), pp(2, 1), k)).collect();
        eprintln!("trees {n} {counts:?}");
    }
}

#[test]
fn simply_connected_mixed() {
    let a = agree("simply-connected", pp(1, 1), pp(1, 1), 1);
    let b = agree("simply-connected", pp(1, 1), pp(1, 1), 2);
    let c = agree("simply-connected", pp(2, 1), pp(1, 2), 1);
    eprintln!("sc {a} {b} {c}");
}
