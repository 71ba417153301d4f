//! Canonical labeling by color refinement plus individualization.
//!
//! Vertices start in cells given by their mark and port colors; cells are
//! refined by the multiset of (edge kind, color, neighbor cell) until
//! stable, and the search individualizes vertices of the smallest
//! non-singleton cell. Every discrete leaf yields an encoding; the least
//! one is the canonical form and the leaves attaining it are exactly the
//! vertex automorphisms.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::{Edge, EdgeKind, Graph, Port, Vertex};
use crate::error::{Error, Result};
use crate::profiles::Color;

const NONE: u32 = u32::MAX;

/// Canonical serialized weak-isomorphism class (marks included).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IsoClassKey(pub String);

impl fmt::Display for IsoClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A vertex and edge bijection between two graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

pub type Automorphism = Isomorphism;

impl Isomorphism {
    pub fn identity(g: &Graph) -> Self {
        Isomorphism {
            vertex_map: (0..g.num_vertices()).collect(),
            edge_map: (0..g.num_edges()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.edge_map.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        let mut edge_map = vec![0; self.edge_map.len()];
        for (i, &j) in self.vertex_map.iter().enumerate() {
            vertex_map[j] = i;
        }
        for (i, &j) in self.edge_map.iter().enumerate() {
            edge_map[j] = i;
        }
        Isomorphism {
            vertex_map,
            edge_map,
        }
    }

    /// First `self`, then `next`.
    pub fn then(&self, next: &Isomorphism) -> Self {
        Isomorphism {
            vertex_map: self.vertex_map.iter().map(|&v| next.vertex_map[v]).collect(),
            edge_map: self.edge_map.iter().map(|&e| next.edge_map[e]).collect(),
        }
    }

    /// Where each input port of `v` in `g` lands at the image vertex in `h`.
    pub fn in_port_map(&self, g: &Graph, h: &Graph, v: usize) -> Vec<usize> {
        let inc = g.incidence();
        inc.in_edges[v]
            .iter()
            .map(|&e| h.edge(self.edge_map[e]).target().expect("edge has a target").port)
            .collect()
    }

    /// Where each output port of `v` in `g` lands at the image vertex in `h`.
    pub fn out_port_map(&self, g: &Graph, h: &Graph, v: usize) -> Vec<usize> {
        let inc = g.incidence();
        inc.out_edges[v]
            .iter()
            .map(|&e| h.edge(self.edge_map[e]).source().expect("edge has a source").port)
            .collect()
    }

    /// Entry `i` is the position in `h`'s input listing of the image of
    /// `g`'s `i`-th input leg.
    pub fn in_leg_perm(&self, g: &Graph, h: &Graph) -> Vec<usize> {
        leg_perm(g.in_listing(), h.in_listing(), &self.edge_map)
    }

    pub fn out_leg_perm(&self, g: &Graph, h: &Graph) -> Vec<usize> {
        leg_perm(g.out_listing(), h.out_listing(), &self.edge_map)
    }

    /// Checks that this really is a weak isomorphism `g → h`.
    pub fn is_weak_iso(&self, g: &Graph, h: &Graph) -> bool {
        if g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges() {
            return false;
        }
        if self.vertex_map.len() != g.num_vertices() || self.edge_map.len() != g.num_edges() {
            return false;
        }
        let vs: HashSet<_> = self.vertex_map.iter().collect();
        let es: HashSet<_> = self.edge_map.iter().collect();
        if vs.len() != g.num_vertices() || es.len() != g.num_edges() {
            return false;
        }
        let vm = |p: Port| self.vertex_map[p.vertex];
        g.edges().iter().enumerate().all(|(i, e)| {
            let f = h.edge(self.edge_map[i]);
            e.color == f.color
                && match (&e.kind, &f.kind) {
                    (EdgeKind::Internal { src, tgt }, EdgeKind::Internal { src: s2, tgt: t2 }) => {
                        vm(*src) == s2.vertex && vm(*tgt) == t2.vertex
                    }
                    (EdgeKind::InputLeg { tgt }, EdgeKind::InputLeg { tgt: t2 }) => {
                        vm(*tgt) == t2.vertex
                    }
                    (EdgeKind::OutputLeg { src }, EdgeKind::OutputLeg { src: s2 }) => {
                        vm(*src) == s2.vertex
                    }
                    (a, b) => a == b,
                }
        })
    }
}

fn leg_perm(from: &[usize], to: &[usize], edge_map: &[usize]) -> Vec<usize> {
    from.iter()
        .map(|&e| {
            to.iter()
                .position(|&f| f == edge_map[e])
                .expect("legs map to legs")
        })
        .collect()
}

/// The canonical representative of a (marked) weak-isomorphism class,
/// with an isomorphism from the input graph onto it.
#[derive(Debug, Clone)]
pub struct Canon {
    pub key: IsoClassKey,
    pub rep: Graph,
    /// Marks of the representative, as a sorted vertex list.
    pub rep_marks: Vec<usize>,
    pub iso: Isomorphism,
}

pub fn canonical_key(g: &Graph, marks: &[usize]) -> IsoClassKey {
    Labeler::new(g, marks).search(false).key()
}

pub fn canonical_form(g: &Graph, marks: &[usize]) -> Canon {
    let labeler = Labeler::new(g, marks);
    let result = labeler.search(false);
    labeler.canon(&result)
}

/// A weak isomorphism `g → h` mapping `marks.0` onto `marks.1`, if any.
pub fn weak_iso(g: &Graph, h: &Graph, marks: Option<(&[usize], &[usize])>) -> Option<Isomorphism> {
    let (mg, mh) = marks.unwrap_or((&[], &[]));
    let cg = canonical_form(g, mg);
    let ch = canonical_form(h, mh);
    (cg.key == ch.key).then(|| cg.iso.then(&ch.iso.inverse()))
}

/// All weak automorphisms fixing `marks` setwise, identity first.
pub fn automorphisms(g: &Graph, marks: &[usize], cap: usize) -> Result<Vec<Automorphism>> {
    if g.is_exceptional() {
        return Ok(vec![Isomorphism::identity(g)]);
    }
    let labeler = Labeler::new(g, marks);
    let result = labeler.search(true);
    let best = &result.best_pos;
    let mut inv_best = vec![0; best.len()];
    for (v, &p) in best.iter().enumerate() {
        inv_best[p as usize] = v;
    }
    let vertex_auts: Vec<Vec<usize>> = result
        .equal_leaves
        .iter()
        .map(|pos| pos.iter().map(|&p| inv_best[p as usize]).collect())
        .sorted()
        .dedup()
        .collect();

    // edges sharing kind, color and endpoints are interchangeable
    let mut classes: BTreeMap<(u8, Color, u32, u32), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        classes.entry(edge_class(e, None)).or_default().push(i);
    }
    let mut per_vertex_aut: u128 = 1;
    for members in classes.values() {
        per_vertex_aut = per_vertex_aut.saturating_mul(crate::profiles::factorial(members.len()));
    }
    if per_vertex_aut.saturating_mul(vertex_auts.len() as u128) > cap as u128 {
        return Err(Error::AutomorphismCap(cap));
    }
    let class_list: Vec<(&(u8, Color, u32, u32), &Vec<usize>)> = classes.iter().collect();
    let mut out = Vec::new();
    for phi in &vertex_auts {
        let images: Vec<&Vec<usize>> = class_list
            .iter()
            .map(|(_, members)| &classes[&edge_class(g.edge(members[0]), Some(phi))])
            .collect();
        let choices: Vec<Vec<Vec<usize>>> = class_list
            .iter()
            .map(|(_, m)| (0..m.len()).permutations(m.len()).collect())
            .collect();
        for pick in choices.iter().multi_cartesian_product_or_unit() {
            let mut edge_map = vec![0; g.num_edges()];
            for (ci, (_, members)) in class_list.iter().enumerate() {
                for (j, &e) in members.iter().enumerate() {
                    edge_map[e] = images[ci][pick[ci][j]];
                }
            }
            out.push(Isomorphism {
                vertex_map: phi.clone(),
                edge_map,
            });
        }
    }
    out.sort();
    Ok(out)
}

trait CartesianOrUnit<'a> {
    fn multi_cartesian_product_or_unit(self) -> Box<dyn Iterator<Item = Vec<&'a Vec<usize>>> + 'a>;
}

impl<'a, I> CartesianOrUnit<'a> for I
where
    I: Iterator<Item = &'a Vec<Vec<usize>>> + 'a,
{
    fn multi_cartesian_product_or_unit(
        self,
    ) -> Box<dyn Iterator<Item = Vec<&'a Vec<usize>>> + 'a> {
        let lists: Vec<&'a Vec<Vec<usize>>> = self.collect();
        if lists.is_empty() {
            return Box::new(std::iter::once(Vec::new()));
        }
        Box::new(lists.into_iter().map(|l| l.iter()).multi_cartesian_product())
    }
}

fn edge_class(e: &Edge, phi: Option<&Vec<usize>>) -> (u8, Color, u32, u32) {
    let m = |v: usize| phi.map_or(v, |p| p[v]) as u32;
    match e.kind {
        EdgeKind::Internal { src, tgt } => (0, e.color, m(src.vertex), m(tgt.vertex)),
        EdgeKind::InputLeg { tgt } => (1, e.color, NONE, m(tgt.vertex)),
        EdgeKind::OutputLeg { src } => (2, e.color, m(src.vertex), NONE),
        EdgeKind::ExceptionalEdge => (3, e.color, NONE, NONE),
        EdgeKind::ExceptionalLoop => (4, e.color, NONE, NONE),
    }
}

struct SearchResult {
    best: Vec<u32>,
    best_pos: Vec<u32>,
    equal_leaves: Vec<Vec<u32>>,
}

impl SearchResult {
    fn key(&self) -> IsoClassKey {
        IsoClassKey(self.best.iter().join("."))
    }
}

struct Labeler<'a> {
    g: &'a Graph,
    marked: Vec<bool>,
    /// (kind, color, neighbor) per vertex; kinds 0 out, 1 in, 2 loop, 3 in-leg, 4 out-leg.
    adjacency: Vec<Vec<(u8, u32, u32)>>,
    invariants: Vec<Vec<u32>>,
}

impl<'a> Labeler<'a> {
    fn new(g: &'a Graph, marks: &[usize]) -> Self {
        let n = g.num_vertices();
        let mut marked = vec![false; n];
        for &m in marks {
            marked[m] = true;
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in g.edges() {
            let c = e.color.0;
            match e.kind {
                EdgeKind::Internal { src, tgt } if src.vertex == tgt.vertex => {
                    adjacency[src.vertex].push((2, c, src.vertex as u32));
                }
                EdgeKind::Internal { src, tgt } => {
                    adjacency[src.vertex].push((0, c, tgt.vertex as u32));
                    adjacency[tgt.vertex].push((1, c, src.vertex as u32));
                }
                EdgeKind::InputLeg { tgt } => adjacency[tgt.vertex].push((3, c, NONE)),
                EdgeKind::OutputLeg { src } => adjacency[src.vertex].push((4, c, NONE)),
                _ => {}
            }
        }
        let invariants = g
            .vertices()
            .iter()
            .zip(&marked)
            .map(|(v, &m)| vertex_invariant(v, m))
            .collect();
        Labeler {
            g,
            marked,
            adjacency,
            invariants,
        }
    }

    fn initial_cells(&self) -> Vec<u32> {
        rank(&self.invariants)
    }

    fn refine(&self, cells: &mut Vec<u32>) {
        let mut count = distinct(cells);
        loop {
            let sigs: Vec<(u32, Vec<(u8, u32, u32)>)> = (0..cells.len())
                .map(|v| {
                    let mut s: Vec<(u8, u32, u32)> = self.adjacency[v]
                        .iter()
                        .map(|&(k, c, w)| (k, c, if w == NONE { NONE } else { cells[w as usize] }))
                        .collect();
                    s.sort_unstable();
                    (cells[v], s)
                })
                .collect();
            *cells = rank(&sigs);
            let next = distinct(cells);
            if next == count {
                return;
            }
            count = next;
        }
    }

    fn search(&self, collect: bool) -> SearchResult {
        let n = self.g.num_vertices();
        if n == 0 {
            let e = self.g.edge(0);
            let code = match e.kind {
                EdgeKind::ExceptionalEdge => 1_000_000_000,
                _ => 1_000_000_001,
            };
            return SearchResult {
                best: vec![code, e.color.0],
                best_pos: Vec::new(),
                equal_leaves: vec![Vec::new()],
            };
        }
        let mut cells = self.initial_cells();
        self.refine(&mut cells);
        let mut state = SearchResult {
            best: Vec::new(),
            best_pos: Vec::new(),
            equal_leaves: Vec::new(),
        };
        self.descend(cells, collect, &mut state);
        state
    }

    fn descend(&self, cells: Vec<u32>, collect: bool, state: &mut SearchResult) {
        let n = cells.len();
        let mut sizes = vec![0usize; n];
        for &c in &cells {
            sizes[c as usize] += 1;
        }
        let target = (0..n)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c));
        let Some(target) = target else {
            let enc = self.encode(&cells);
            if state.best.is_empty() || enc < state.best {
                state.best = enc;
                state.best_pos = cells.clone();
                state.equal_leaves.clear();
                if collect {
                    state.equal_leaves.push(cells);
                }
            } else if enc == state.best && collect {
                state.equal_leaves.push(cells);
            }
            return;
        };
        for v in (0..n).filter(|&v| cells[v] as usize == target) {
            let keyed: Vec<u64> = (0..n)
                .map(|w| 2 * cells[w] as u64 + u64::from(w != v))
                .collect();
            let mut next = rank(&keyed);
            self.refine(&mut next);
            self.descend(next, collect, state);
        }
    }

    /// Vertex invariants in position order, then the sorted edge tuples.
    fn encode(&self, pos: &[u32]) -> Vec<u32> {
        let n = pos.len();
        let mut order = vec![0; n];
        for (v, &p) in pos.iter().enumerate() {
            order[p as usize] = v;
        }
        let mut out = vec![n as u32];
        for &v in &order {
            out.extend_from_slice(&self.invariants[v]);
        }
        let mut tuples = self.edge_tuples(pos);
        tuples.sort_unstable();
        out.push(tuples.len() as u32);
        for (k, c, s, t) in tuples {
            out.extend_from_slice(&[k as u32, c, s, t]);
        }
        out
    }

    fn edge_tuples(&self, pos: &[u32]) -> Vec<(u8, u32, u32, u32)> {
        self.g
            .edges()
            .iter()
            .map(|e| {
                let (k, c, s, t) = edge_class(e, None);
                let m = |x: u32| if x == NONE { NONE } else { pos[x as usize] };
                (k, c.0, m(s), m(t))
            })
            .collect()
    }

    fn canon(&self, result: &SearchResult) -> Canon {
        let g = self.g;
        if g.is_exceptional() {
            return Canon {
                key: result.key(),
                rep: g.clone(),
                rep_marks: Vec::new(),
                iso: Isomorphism::identity(g),
            };
        }
        let pos = &result.best_pos;
        let n = pos.len();
        let tuples = self.edge_tuples(pos);
        let mut order: Vec<usize> = (0..tuples.len()).collect();
        order.sort_by_key(|&e| (tuples[e], e));
        let mut edge_map = vec![0; tuples.len()];
        for (new, &old) in order.iter().enumerate() {
            edge_map[old] = new;
        }
        let mut vertices = vec![Vertex::default(); n];
        let mut edges = Vec::with_capacity(order.len());
        let mut ins = Vec::new();
        let mut outs = Vec::new();
        for (new, &old) in order.iter().enumerate() {
            let (k, c, s, t) = tuples[old];
            let color = Color(c);
            let mut out_port = |v: u32| {
                let vx = &mut vertices[v as usize];
                vx.outputs.push(color);
                Port::new(v as usize, vx.outputs.len() - 1)
            };
            let kind = match k {
                0 => {
                    let src = out_port(s);
                    let vx = &mut vertices[t as usize];
                    vx.inputs.push(color);
                    let tgt = Port::new(t as usize, vx.inputs.len() - 1);
                    EdgeKind::Internal { src, tgt }
                }
                1 => {
                    let vx = &mut vertices[t as usize];
                    vx.inputs.push(color);
                    ins.push(new);
                    EdgeKind::InputLeg {
                        tgt: Port::new(t as usize, vx.inputs.len() - 1),
                    }
                }
                _ => {
                    outs.push(new);
                    EdgeKind::OutputLeg { src: out_port(s) }
                }
            };
            edges.push(Edge { color, kind });
        }
        let rep = Graph::new_unchecked(vertices, edges, ins, outs);
        let vertex_map: Vec<usize> = pos.iter().map(|&p| p as usize).collect();
        let rep_marks = (0..n)
            .filter(|&v| self.marked[v])
            .map(|v| vertex_map[v])
            .sorted()
            .collect();
        Canon {
            key: result.key(),
            rep,
            rep_marks,
            iso: Isomorphism {
                vertex_map,
                edge_map,
            },
        }
    }
}

fn vertex_invariant(v: &Vertex, marked: bool) -> Vec<u32> {
    let mut out = vec![u32::from(marked), v.inputs.len() as u32];
    out.extend(v.inputs.iter().map(|c| c.0).sorted());
    out.push(v.outputs.len() as u32);
    out.extend(v.outputs.iter().map(|c| c.0).sorted());
    out
}

fn rank<T: Ord>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<&T> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("present") as u32)
        .collect()
}

fn distinct(cells: &[u32]) -> usize {
    cells.iter().collect::<HashSet<_>>().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::walnut;
    use crate::profiles::ProfilePair;

    #[test]
    fn corollas_with_swapped_inputs_are_weakly_isomorphic() {
        let a = Color(0);
        let b = Color(1);
        let g = Graph::corolla(&ProfilePair::new(vec![a, b], vec![]));
        let h = Graph::corolla(&ProfilePair::new(vec![b, a], vec![]));
        let iso = weak_iso(&g, &h, None).expect("weakly isomorphic");
        assert!(iso.is_weak_iso(&g, &h));
        assert_eq!(canonical_key(&g, &[]), canonical_key(&h, &[]));
    }

    #[test]
    fn exceptional_keys_separate_colors() {
        let e0 = Graph::exceptional_edge(Color(0));
        let e1 = Graph::exceptional_edge(Color(1));
        let l0 = Graph::exceptional_loop(Color(0));
        assert_ne!(canonical_key(&e0, &[]), canonical_key(&e1, &[]));
        assert_ne!(canonical_key(&e0, &[]), canonical_key(&l0, &[]));
        assert_ne!(
            canonical_key(&e0, &[]),
            canonical_key(&Graph::corolla(&ProfilePair::unary(Color(0))), &[])
        );
    }

    #[test]
    fn walnut_marks_distinguish_ends() {
        let w = walnut();
        assert_ne!(canonical_key(&w, &[0]), canonical_key(&w, &[1]));
        assert!(weak_iso(&w, &w, Some((&[0], &[1]))).is_none());
        assert_eq!(automorphisms(&w, &[], 100).unwrap().len(), 2);
    }

    #[test]
    fn repeated_leg_colors_give_swaps() {
        let a = Color(0);
        let g = Graph::corolla(&ProfilePair::new(vec![a, a], vec![]));
        let auts = automorphisms(&g, &[], 100).unwrap();
        assert_eq!(auts.len(), 2);
        assert!(auts[0].is_identity());
        let g = Graph::corolla(&ProfilePair::new(vec![a, Color(1)], vec![Color(2)]));
        assert_eq!(automorphisms(&g, &[], 100).unwrap().len(), 1);
    }

    #[test]
    fn canonical_rep_is_a_fixed_point() {
        let w = walnut();
        let c = canonical_form(&w, &[1]);
        assert!(c.iso.is_weak_iso(&w, &c.rep));
        let again = canonical_form(&c.rep, &c.rep_marks);
        assert_eq!(again.rep, c.rep);
        assert_eq!(again.key, c.key);
    }

    #[test]
    fn aut_cap_is_enforced() {
        let a = Color(0);
        let g = Graph::corolla(&ProfilePair::new(vec![a; 5], vec![]));
        assert_eq!(automorphisms(&g, &[], 100), Err(Error::AutomorphismCap(100)));
        assert_eq!(automorphisms(&g, &[], 120).unwrap().len(), 120);
    }
}
