//! Reduced marked graphs by generate-and-filter: enumerate every member of
//! the scheme within a bound large enough to contain all of them, try every
//! admissible marking, and keep the reduced ones.

use std::collections::BTreeMap;

use itertools::Itertools;
use props_engine::budget::Budget;
use props_engine::graph::{EdgeKind, Graph};
use props_engine::marked::MarkedGraph;
use props_engine::profiles::ProfilePair;
use props_engine::schemes::{enumerate_graphs, Bound, PastingScheme};
use props_engine::Result;

use crate::iso::{brute_key, BruteKey};

/// Every distinguished flag lies on an internal edge to a normal vertex,
/// and no internal edge joins two normal vertices.
pub fn is_reduced(g: &Graph, ds: &[usize]) -> bool {
    let marked = |v: usize| ds.contains(&v);
    g.edges().iter().all(|e| match e.kind {
        EdgeKind::Internal { src, tgt } => marked(src.vertex) != marked(tgt.vertex),
        EdgeKind::InputLeg { tgt } => !marked(tgt.vertex),
        EdgeKind::OutputLeg { src } => !marked(src.vertex),
        _ => true,
    })
}

/// Every distinguished flag lies on an internal edge whose other end is
/// normal.
pub fn is_well_marked(g: &Graph, ds: &[usize]) -> bool {
    let marked = |v: usize| ds.contains(&v);
    !ds.is_empty()
        && g.edges().iter().all(|e| match e.kind {
            EdgeKind::Internal { src, tgt } => !(marked(src.vertex) && marked(tgt.vertex)),
            EdgeKind::InputLeg { tgt } => !marked(tgt.vertex),
            EdgeKind::OutputLeg { src } => !marked(src.vertex),
            _ => true,
        })
}

/// One representative per weak-isomorphism class of reduced marked
/// members with profile in the orbit of `r` and exactly `k` distinguished
/// vertices, all in the orbit of `s`.
///
/// A reduced graph has at most `k·|s|` normal vertices, each touching a
/// distinguished flag, and exactly `2k·|s| + |r|` flags.
pub fn reduced_by_filter(
    scheme: &PastingScheme,
    r: &ProfilePair,
    s: &ProfilePair,
    k: usize,
    colors: usize,
    budget: &Budget,
) -> Result<Vec<MarkedGraph>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let a = s.arity();
    let flags = 2 * k * a + r.arity();
    let bound = Bound::new(k + k * a, flags, colors);
    let (r, s) = (r.orbit_key(), s.orbit_key());
    let mut found: BTreeMap<BruteKey, MarkedGraph> = BTreeMap::new();
    for (_, g) in enumerate_graphs(&scheme.universe(bound), budget)? {
        if g.num_flags() != flags || g.profile().orbit_key() != r || !scheme.member(&g) {
            continue;
        }
        let candidates: Vec<usize> = (0..g.num_vertices())
            .filter(|&v| g.vertex(v).profile().orbit_key() == s)
            .collect();
        for ds in candidates.into_iter().combinations(k) {
            if is_reduced(&g, &ds) {
                found
                    .entry(brute_key(&g, &ds))
                    .or_insert_with(|| MarkedGraph::new(g.clone(), ds.clone()).expect("k ≥ 1 vertices"));
            }
        }
    }
    Ok(found.into_values().collect())
}
