use std::sync::OnceLock;

use proptest::prelude::*;

use oracles::{brute_automorphism_count, brute_key};
use props_engine::budget::Budget;
use props_engine::graph::{automorphisms, canonical_key, strict_iso};
use props_engine::ops::{shrink, shrink_sequence};
use props_engine::schemes::{enumerate_graphs, Bound, Builtin, PastingScheme};
use props_engine::Graph;

/// Connected wheeled graphs, up to three vertices and eight flags.
fn universe() -> &'static [Graph] {
    static GRAPHS: OnceLock<Vec<Graph>> = OnceLock::new();
    GRAPHS.get_or_init(|| {
        let s = PastingScheme::builtin(Builtin::ConnectedWheeled);
        enumerate_graphs(&s.universe(Bound::new(3, 8, 1)), &Budget::default())
            .unwrap()
            .into_iter()
            .map(|(_, g)| g)
            .filter(|g| !g.is_exceptional())
            .collect()
    })
}

/// The permutation sorting `keys[..n]`.
fn perm(keys: &[u32], n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.sort_by_key(|&i| (keys[i % keys.len()], i));
    p
}

fn graph() -> impl Strategy<Value = Graph> {
    any::<prop::sample::Index>().prop_map(|i| i.get(universe()).clone())
}

fn keys() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn key_ignores_numbering(g in graph(), k in keys()) {
        let h = g.renumbered(&perm(&k, g.num_vertices()), &perm(&k[3..], g.num_edges()));
        prop_assert_eq!(canonical_key(&g, &[]), canonical_key(&h, &[]));
    }

    #[test]
    fn key_ignores_leg_and_port_order(g in graph(), k in keys(), v in any::<prop::sample::Index>()) {
        let p = g.profile();
        let mut h = g.relisted(&perm(&k, p.inputs.len()), &perm(&k[5..], p.outputs.len()));
        let v = v.index(g.num_vertices());
        let vp = g.vertex(v).profile();
        h = h.relist_vertex(v, &perm(&k[7..], vp.inputs.len()), &perm(&k[9..], vp.outputs.len()));
        prop_assert_eq!(canonical_key(&g, &[]), canonical_key(&h, &[]));
    }

    #[test]
    fn keys_agree_with_brute_force(g in graph(), h in graph()) {
        prop_assert_eq!(
            canonical_key(&g, &[]) == canonical_key(&h, &[]),
            brute_key(&g, &[]) == brute_key(&h, &[])
        );
    }

    #[test]
    fn automorphism_counts_agree(g in graph(), marked in any::<bool>()) {
        let marks: Vec<usize> = if marked { vec![0] } else { vec![] };
        let auts = automorphisms(&g, &marks, 10_000).unwrap();
        prop_assert_eq!(auts.len(), brute_automorphism_count(&g, &marks));
    }

    #[test]
    fn renumbering_back_is_strictly_isomorphic(g in graph(), k in keys()) {
        let h = g.renumbered(&perm(&k, g.num_vertices()), &perm(&k[2..], g.num_edges()));
        prop_assert!(strict_iso(&g, &h, None).is_some());
    }

    #[test]
    fn shrinking_keeps_profile_and_scheme(g in graph(), e in any::<prop::sample::Index>()) {
        let internal = g.internal_edges();
        prop_assume!(!internal.is_empty());
        let e = internal[e.index(internal.len())];
        let s = shrink(&g, e).unwrap();
        prop_assert_eq!(s.profile(), g.profile());
        prop_assert_eq!(s.num_flags() + 2, g.num_flags());
        let merged = usize::from(!g.edge(e).is_loop());
        prop_assert_eq!(s.num_vertices() + merged, g.num_vertices());
        prop_assert!(PastingScheme::builtin(Builtin::ConnectedWheeled).member(&s));
    }

    #[test]
    fn shrink_order_does_not_matter(g in graph(), k in keys(), take in 0usize..4) {
        let internal = g.internal_edges();
        let set: Vec<usize> = perm(&k, internal.len()).into_iter().take(take).map(|i| internal[i]).collect();
        let mut sorted = set.clone();
        sorted.sort_unstable();
        let a = shrink_sequence(&g, &set).unwrap().quotient;
        let b = shrink_sequence(&g, &sorted).unwrap().quotient;
        prop_assert_eq!(canonical_key(&a, &[]), canonical_key(&b, &[]));
    }
}
