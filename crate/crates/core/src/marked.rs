//! Marked graphs: a graph with a nonempty set of distinguished vertices.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{automorphisms, canonical_form, Edge, EdgeKind, Graph, GraphJson, IsoClassKey, Port, Vertex};
use crate::ops::{shrink_sequence, substitute_tracked, ShrinkSet};
use crate::profiles::{Color, ColorSet, ProfilePair};
use crate::schemes::PastingScheme;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedGraph {
    pub graph: Graph,
    /// Distinguished vertices, sorted.
    pub ds: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkingClass {
    Plain,
    WellMarked,
    Reduced,
}

impl MarkingClass {
    pub fn name(self) -> &'static str {
        match self {
            MarkingClass::Plain => "plain",
            MarkingClass::WellMarked => "well_marked",
            MarkingClass::Reduced => "reduced",
        }
    }
}

impl MarkedGraph {
    pub fn new(graph: Graph, mut ds: Vec<usize>) -> Result<Self> {
        ds.sort_unstable();
        if ds.is_empty() {
            return Err(Error::InvalidGraph("a marked graph needs a distinguished vertex".into()));
        }
        if ds.windows(2).any(|w| w[0] == w[1]) || ds[ds.len() - 1] >= graph.num_vertices() {
            return Err(Error::InvalidGraph("distinguished vertices must be distinct vertices".into()));
        }
        Ok(MarkedGraph { graph, ds })
    }

    pub fn is_distinguished(&self, v: usize) -> bool {
        self.ds.binary_search(&v).is_ok()
    }

    pub fn normal(&self) -> Vec<usize> {
        (0..self.graph.num_vertices())
            .filter(|&v| !self.is_distinguished(v))
            .collect()
    }

    pub fn key(&self) -> IsoClassKey {
        crate::graph::canonical_key(&self.graph, &self.ds)
    }

    /// The canonical representative of the marked weak-isomorphism class.
    pub fn canonical(&self) -> MarkedGraph {
        let c = canonical_form(&self.graph, &self.ds);
        MarkedGraph {
            graph: c.rep,
            ds: c.rep_marks,
        }
    }

    pub fn to_json(&self, colors: &ColorSet) -> Value {
        json!({
            "graph": GraphJson::from_graph(&self.graph, colors),
            "ds": self.ds,
        })
    }
}

pub fn classify_marking(m: &MarkedGraph) -> MarkingClass {
    let g = &m.graph;
    let inc = g.incidence();
    let other_end_normal = |e: usize, at: usize| match g.edge(e).kind {
        EdgeKind::Internal { src, tgt } => {
            let other = if src.vertex == at { tgt.vertex } else { src.vertex };
            other != at && !m.is_distinguished(other)
        }
        _ => false,
    };
    let well = m.ds.iter().all(|&d| {
        inc.in_edges[d]
            .iter()
            .chain(&inc.out_edges[d])
            .all(|&e| other_end_normal(e, d))
    });
    if !well {
        return MarkingClass::Plain;
    }
    let normal_normal = g.edges().iter().any(|e| match e.kind {
        EdgeKind::Internal { src, tgt } => {
            !m.is_distinguished(src.vertex) && !m.is_distinguished(tgt.vertex)
        }
        _ => false,
    });
    if normal_normal {
        MarkingClass::WellMarked
    } else {
        MarkingClass::Reduced
    }
}

/// A reduction together with its decomposition `G = (G/E)({H})`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub reduced: MarkedGraph,
    pub decomposition: ShrinkSet,
    /// The shrunk edges: every internal edge with both ends normal.
    pub edges: Vec<usize>,
}

/// Shrinks every internal edge with both end vertices normal.
pub fn reduce(m: &MarkedGraph, scheme: &PastingScheme) -> Result<Reduction> {
    if !scheme.shrinkable_flag() {
        return Err(Error::UnsupportedScheme(format!(
            "{} is not shrinkable",
            scheme.name()
        )));
    }
    if !scheme.member(&m.graph) {
        return Err(Error::ReductionPrecondition(format!(
            "the graph is not a member of {}",
            scheme.name()
        )));
    }
    reduce_unchecked(m)
}

/// Reduction without the scheme preconditions; only wellness is required.
pub fn reduce_unchecked(m: &MarkedGraph) -> Result<Reduction> {
    reduce_in_order(m, &normal_normal_edges(m))
}

/// Every internal edge with both end vertices normal.
pub fn normal_normal_edges(m: &MarkedGraph) -> Vec<usize> {
    m.graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| match e.kind {
            EdgeKind::Internal { src, tgt } => {
                !m.is_distinguished(src.vertex) && !m.is_distinguished(tgt.vertex)
            }
            _ => false,
        })
        .map(|(i, _)| i)
        .collect()
}

/// Reduction shrinking the normal-normal edges in the order given.
pub fn reduce_in_order(m: &MarkedGraph, order: &[usize]) -> Result<Reduction> {
    if classify_marking(m) == MarkingClass::Plain {
        return Err(Error::ReductionPrecondition("the marking is not well marked".into()));
    }
    let mut edges = order.to_vec();
    edges.sort_unstable();
    if edges != normal_normal_edges(m) {
        return Err(Error::ReductionPrecondition(
            "the order must list every normal-normal edge once".into(),
        ));
    }
    let decomposition = shrink_sequence(&m.graph, order)?;
    let ds = decomposition
        .piece_vertices
        .iter()
        .enumerate()
        .filter(|(_, grp)| grp.iter().any(|&v| m.is_distinguished(v)))
        .map(|(u, _)| u)
        .collect();
    let reduced = MarkedGraph::new(decomposition.quotient.clone(), ds)?;
    Ok(Reduction {
        reduced,
        decomposition,
        edges,
    })
}

/// `K({(G_v, ds_v)})` with `ds = ∐ ds_v`; every vertex of `K` gets a piece.
pub fn substitute_marked(k: &Graph, pieces: &[MarkedGraph]) -> Result<MarkedGraph> {
    if k.num_vertices() == 0 {
        return Err(Error::InvalidGraph("cannot substitute into a graph without vertices".into()));
    }
    if pieces.len() != k.num_vertices() {
        return Err(Error::InvalidGraph(format!(
            "{} pieces for {} vertices",
            pieces.len(),
            k.num_vertices()
        )));
    }
    let assignment: BTreeMap<usize, Graph> =
        pieces.iter().map(|p| p.graph.clone()).enumerate().collect();
    let s = substitute_tracked(k, &assignment)?;
    let ds = s
        .vertex_origin
        .iter()
        .enumerate()
        .filter(|(_, &(v, j))| pieces[v].is_distinguished(j))
        .map(|(i, _)| i)
        .collect();
    MarkedGraph::new(s.graph, ds)
}

/// One weak-isomorphism class of reduced marked graphs.
#[derive(Debug, Clone)]
pub struct ReducedClass {
    pub key: IsoClassKey,
    pub marked: MarkedGraph,
    pub aut_order: usize,
}

impl ReducedClass {
    pub fn to_json(&self, colors: &ColorSet) -> Value {
        json!({
            "key": self.key,
            "graph": GraphJson::from_graph(&self.marked.graph, colors),
            "ds": self.marked.ds,
            "aut_order": self.aut_order,
        })
    }
}

/// Every reduced marked graph in `scheme` whose profile lies in the orbit
/// of `r` and which has exactly `k` distinguished vertices, all with
/// profile in the orbit of `s`, sorted by key.
///
/// Each normal vertex is a block of distinguished flags (at least one, by
/// connectivity) plus some graph legs, so the search is finite.
pub fn enumerate_reduced(
    scheme: &PastingScheme,
    r: &ProfilePair,
    s: &ProfilePair,
    k: usize,
    budget: &Budget,
) -> Result<Vec<ReducedClass>> {
    enumerate_reduced_where(scheme, r, s, k, budget, &|_| true)
}

/// [`enumerate_reduced`] keeping only graphs whose normal vertices all
/// satisfy `normal_ok`, which is checked before any canonical labelling.
pub fn enumerate_reduced_where(
    scheme: &PastingScheme,
    r: &ProfilePair,
    s: &ProfilePair,
    k: usize,
    budget: &Budget,
    normal_ok: &(dyn Fn(&ProfilePair) -> bool + Sync),
) -> Result<Vec<ReducedClass>> {
    let s = s.orbit_key();
    let r = r.orbit_key();
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut found: BTreeMap<IsoClassKey, MarkedGraph> = BTreeMap::new();
    if s.arity() == 0 {
        if k == 1 && r.arity() == 0 {
            let g = Graph::corolla(&s);
            if scheme.member(&g) {
                let m = MarkedGraph::new(g, vec![0])?;
                found.insert(m.key(), m.canonical());
            }
        }
        return finish(found, budget);
    }

    // distinguished flags: (vertex, is_input, port, color)
    let mut dflags: Vec<(usize, bool, usize, Color)> = Vec::new();
    for d in 0..k {
        for (p, &c) in s.inputs.0.iter().enumerate() {
            dflags.push((d, true, p, c));
        }
        for (p, &c) in s.outputs.0.iter().enumerate() {
            dflags.push((d, false, p, c));
        }
    }
    // legs grouped by (is_input, color) with multiplicity
    let mut leg_groups: Vec<(bool, Color, usize)> = Vec::new();
    for (is_input, prof) in [(true, &r.inputs), (false, &r.outputs)] {
        for (c, n) in prof.0.iter().copied().dedup_with_count().map(|(n, c)| (c, n)) {
            leg_groups.push((is_input, c, n));
        }
    }

    // every distinguished flag lies on an internal edge, so a connected
    // graph has at most this many normal vertices, and a tree exactly this
    // many
    let most = dflags.len() + 1 - k;
    let least = if scheme.universe(Default::default()).forest { most } else { 1 };
    let caps = scheme.port_caps();
    let partitions = flag_partitions(&dflags, k, (least, most), caps);
    let results: Vec<Vec<(IsoClassKey, MarkedGraph)>> = partitions
        .par_iter()
        .map(|blocks| {
            let mut out = Vec::new();
            let dists: Vec<Vec<Vec<usize>>> = leg_groups
                .iter()
                .map(|&(_, _, n)| compositions(n, blocks.len()))
                .collect();
            let choices: Vec<Vec<&Vec<usize>>> = if dists.is_empty() {
                vec![Vec::new()]
            } else {
                dists.iter().map(|d| d.iter()).multi_cartesian_product().collect()
            };
            for choice in choices {
                if !legs_fit(&dflags, blocks, &leg_groups, &choice, caps) {
                    continue;
                }
                let g = build(k, &s, &dflags, blocks, &leg_groups, &choice);
                let Some(g) = g else { continue };
                if !g.vertices()[k..].iter().all(|v| normal_ok(&v.profile())) || !scheme.member(&g) {
                    continue;
                }
                let m = MarkedGraph::new(g, (0..k).collect()).expect("distinguished vertices exist");
                debug_assert_eq!(classify_marking(&m), MarkingClass::Reduced);
                out.push((m.key(), m.canonical()));
            }
            out
        })
        .collect();
    for (key, m) in results.into_iter().flatten() {
        found.entry(key).or_insert(m);
        if found.len() > budget.enumeration_cap {
            return Err(Error::Budget(format!(
                "reduced-graph enumeration exceeded {} classes",
                budget.enumeration_cap
            )));
        }
    }
    finish(found, budget)
}

fn finish(found: BTreeMap<IsoClassKey, MarkedGraph>, budget: &Budget) -> Result<Vec<ReducedClass>> {
    found
        .into_iter()
        .map(|(key, marked)| {
            let aut_order = automorphisms(&marked.graph, &marked.ds, budget.aut_cap)?.len();
            Ok(ReducedClass {
                key,
                marked,
                aut_order,
            })
        })
        .collect()
}

/// Wires `k` distinguished vertices of type `s` to one normal vertex per
/// block, then hangs the legs; `None` if the result is disconnected.
fn build(
    k: usize,
    s: &ProfilePair,
    dflags: &[(usize, bool, usize, Color)],
    blocks: &[Vec<usize>],
    leg_groups: &[(bool, Color, usize)],
    choice: &[&Vec<usize>],
) -> Option<Graph> {
    let mut vertices: Vec<Vertex> = (0..k)
        .map(|_| Vertex::new(s.inputs.0.clone(), s.outputs.0.clone()))
        .collect();
    let mut edges = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        let w = vertices.len();
        let mut v = Vertex::default();
        for &f in block {
            let (d, is_input, p, c) = dflags[f];
            if is_input {
                v.outputs.push(c);
                edges.push(Edge::internal(c, Port::new(w, v.outputs.len() - 1), Port::new(d, p)));
            } else {
                v.inputs.push(c);
                edges.push(Edge::internal(c, Port::new(d, p), Port::new(w, v.inputs.len() - 1)));
            }
        }
        for (gi, &(is_input, c, _)) in leg_groups.iter().enumerate() {
            for _ in 0..choice[gi][b] {
                if is_input {
                    v.inputs.push(c);
                    edges.push(Edge::input(c, Port::new(w, v.inputs.len() - 1)));
                } else {
                    v.outputs.push(c);
                    edges.push(Edge::output(c, Port::new(w, v.outputs.len() - 1)));
                }
            }
        }
        vertices.push(v);
    }
    Graph::with_default_listings(vertices, edges).ok()
}

/// All set partitions of `0..n`, blocks in order of their least element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    set_partitions_bounded(n, 0, n)
}

/// Set partitions of `0..n` into between `least` and `most` blocks.
pub fn set_partitions_bounded(n: usize, least: usize, most: usize) -> Vec<Vec<Vec<usize>>> {
    let mut labels = Vec::with_capacity(n);
    let mut out = Vec::new();
    grow(n, (least, most), &mut labels, 0, &mut |_, _| true, &mut |l| out.push(blocks_of(l)));
    out
}

/// Restricted growth strings: `labels[i]` is the block of `i`, blocks
/// numbered by first appearance. `step(labels)` may reject the newest label.
fn grow(
    n: usize,
    bounds: (usize, usize),
    labels: &mut Vec<usize>,
    used: usize,
    step: &mut dyn FnMut(&[usize], usize) -> bool,
    emit: &mut dyn FnMut(&[usize]),
) {
    let i = labels.len();
    if used + (n - i) < bounds.0 {
        return;
    }
    if i == n {
        emit(labels);
        return;
    }
    for b in 0..=used.min(bounds.1.saturating_sub(1)) {
        labels.push(b);
        let fresh = usize::from(b == used);
        if step(labels, used + fresh) {
            grow(n, bounds, labels, used + fresh, step, emit);
        }
        labels.pop();
    }
}

fn blocks_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, &b) in labels.iter().enumerate() {
        if b == blocks.len() {
            blocks.push(Vec::new());
        }
        blocks[b].push(i);
    }
    blocks
}

/// Relabels blocks by first appearance.
fn normalize(raw: &[usize]) -> Vec<usize> {
    let mut map: Vec<Option<usize>> = vec![None; raw.len()];
    let mut next = 0;
    raw.iter()
        .map(|&b| {
            *map[b].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// Partitions of the distinguished flags into normal vertices, up to some
/// of the symmetry of the distinguished vertices: flags of one vertex with
/// the same direction and color are interchangeable, and so are the
/// distinguished vertices themselves. Among the partitions in one orbit,
/// the least restricted growth string passes every test here, so no
/// isomorphism class is lost.
fn flag_partitions(
    dflags: &[(usize, bool, usize, Color)],
    k: usize,
    bounds: (usize, usize),
    (in_cap, out_cap): (usize, usize),
) -> Vec<Vec<Vec<usize>>> {
    let n = dflags.len();
    let per = n / k;
    // the previous flag of the same vertex, direction and color
    let prev: Vec<Option<usize>> = (0..n)
        .map(|i| {
            let (d, dir, _, c) = dflags[i];
            (0..i).rev().find(|&j| dflags[j].0 == d && dflags[j].1 == dir && dflags[j].3 == c)
        })
        .collect();
    let mut out = Vec::new();
    let mut step = |labels: &[usize], _: usize| {
        let i = labels.len() - 1;
        let b = labels[i];
        if prev[i].is_some_and(|j| labels[j] > b) {
            return false;
        }
        // recount the block of flag i from scratch: blocks are small
        let (mut bi, mut bo) = (0, 0);
        for (j, &l) in labels.iter().enumerate() {
            if l == b {
                if dflags[j].1 {
                    bo += 1;
                } else {
                    bi += 1;
                }
            }
        }
        bo <= out_cap && bi <= in_cap
    };
    let mut emit = |labels: &[usize]| {
        let swapped_smaller = (0..k.saturating_sub(1)).any(|d| {
            let raw: Vec<usize> = (0..n)
                .map(|j| {
                    let (e, p) = (j / per, j % per);
                    let src = if e == d {
                        (d + 1) * per + p
                    } else if e == d + 1 {
                        d * per + p
                    } else {
                        j
                    };
                    labels[src]
                })
                .collect();
            normalize(&raw) < labels.to_vec()
        });
        if !swapped_smaller {
            out.push(blocks_of(labels));
        }
    };
    let mut labels = Vec::with_capacity(n);
    grow(n, bounds, &mut labels, 0, &mut step, &mut emit);
    out
}

/// Whether hanging the legs as chosen keeps every normal vertex within the
/// scheme's port bounds.
fn legs_fit(
    dflags: &[(usize, bool, usize, Color)],
    blocks: &[Vec<usize>],
    leg_groups: &[(bool, Color, usize)],
    choice: &[&Vec<usize>],
    (in_cap, out_cap): (usize, usize),
) -> bool {
    blocks.iter().enumerate().all(|(b, block)| {
        let mut outs = block.iter().filter(|&&f| dflags[f].1).count();
        let mut ins = block.len() - outs;
        for (gi, &(is_input, _, _)) in leg_groups.iter().enumerate() {
            if is_input {
                ins += choice[gi][b];
            } else {
                outs += choice[gi][b];
            }
        }
        ins <= in_cap && outs <= out_cap
    })
}

/// All ways to write `n` as an ordered sum of `parts` nonnegative integers.
pub fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The spider over a corolla: the corolla with a unary vertex grafted on
/// every leg, its center distinguished.
pub fn spider(pp: &ProfilePair) -> MarkedGraph {
    let g = crate::ops::extend_both(&Graph::corolla(pp));
    MarkedGraph::new(g, vec![0]).expect("the center exists")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::Builtin;

    const C: Color = Color(0);

    fn walnut() -> Graph {
        Graph::new(
            vec![Vertex::new(vec![], vec![C, C]), Vertex::new(vec![C, C], vec![])],
            vec![
                Edge::internal(C, Port::new(0, 0), Port::new(1, 0)),
                Edge::internal(C, Port::new(0, 1), Port::new(1, 1)),
            ],
            vec![],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn classification_examples() {
        let sp = spider(&ProfilePair::new(vec![C, Color(1)], vec![Color(2)]));
        assert_eq!(classify_marking(&sp), MarkingClass::Reduced);
        let cor = MarkedGraph::new(Graph::corolla(&ProfilePair::unary(C)), vec![0]).unwrap();
        assert_eq!(classify_marking(&cor), MarkingClass::Plain);
        let w = MarkedGraph::new(walnut(), vec![0]).unwrap();
        assert_eq!(classify_marking(&w), MarkingClass::Reduced);
    }

    #[test]
    fn chain_reduction_merges_the_normal_tail() {
        // n1 -> d -> n2 -> n3
        let g = Graph::with_default_listings(
            vec![
                Vertex::new(vec![C], vec![C]),
                Vertex::new(vec![C], vec![C]),
                Vertex::new(vec![C], vec![C]),
                Vertex::new(vec![C], vec![C]),
            ],
            vec![
                Edge::input(C, Port::new(0, 0)),
                Edge::internal(C, Port::new(0, 0), Port::new(1, 0)),
                Edge::internal(C, Port::new(1, 0), Port::new(2, 0)),
                Edge::internal(C, Port::new(2, 0), Port::new(3, 0)),
                Edge::output(C, Port::new(3, 0)),
            ],
        )
        .unwrap();
        let m = MarkedGraph::new(g, vec![1]).unwrap();
        assert_eq!(classify_marking(&m), MarkingClass::WellMarked);
        let red = reduce(&m, &PastingScheme::builtin(Builtin::UnitalLinear)).unwrap();
        assert_eq!(red.reduced.graph.num_vertices(), 3);
        assert_eq!(classify_marking(&red.reduced), MarkingClass::Reduced);
        assert_eq!(red.reduced.normal().len(), 2);
    }

    #[test]
    fn reduce_preconditions() {
        let cor = MarkedGraph::new(Graph::corolla(&ProfilePair::unary(C)), vec![0]).unwrap();
        let ulin = PastingScheme::builtin(Builtin::UnitalLinear);
        assert!(matches!(reduce(&cor, &ulin), Err(Error::ReductionPrecondition(_))));
        let wf = PastingScheme::builtin(Builtin::ConnectedWheelFree);
        let w = MarkedGraph::new(walnut(), vec![0]).unwrap();
        assert!(matches!(reduce(&w, &wf), Err(Error::UnsupportedScheme(_))));
    }

    #[test]
    fn linear_alternating_chain_is_the_only_class() {
        let ulin = PastingScheme::builtin(Builtin::UnitalLinear);
        let u = ProfilePair::unary(C);
        let classes = enumerate_reduced(&ulin, &u, &u, 2, &Budget::default()).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].marked.graph.num_vertices(), 5);
    }

    #[test]
    fn flagless_distinguished_vertex() {
        let wh = PastingScheme::builtin(Builtin::ConnectedWheeled);
        let e = ProfilePair::default();
        let one = enumerate_reduced(&wh, &e, &e, 1, &Budget::default()).unwrap();
        assert_eq!(one.len(), 1);
        assert!(enumerate_reduced(&wh, &e, &e, 2, &Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn partitions_and_compositions() {
        assert_eq!(set_partitions(4).len(), 15);
        assert_eq!(set_partitions_bounded(5, 2, 2).len(), 15);
        assert_eq!(set_partitions_bounded(5, 3, 3).len(), 25);
        assert_eq!(set_partitions_bounded(5, 0, 5).len(), 52);
        assert_eq!(compositions(2, 3).len(), 6);
    }
}
