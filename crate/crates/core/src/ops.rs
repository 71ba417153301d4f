//! Graph substitution, leg extensions and edge shrinking.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeKind, Graph, Port, UnionFind, Vertex};
use crate::profiles::ProfilePair;

/// The result of a substitution together with the origin of every vertex.
#[derive(Debug, Clone)]
pub struct Substituted {
    pub graph: Graph,
    /// For each result vertex: the vertex of `G` it came from and its index
    /// inside the graph substituted there.
    pub vertex_origin: Vec<(usize, usize)>,
}

/// Replaces each vertex `v` in the assignment by its graph; unassigned
/// vertices stay as they are.
pub fn substitute(g: &Graph, assignment: &BTreeMap<usize, Graph>) -> Result<Graph> {
    substitute_tracked(g, assignment).map(|s| s.graph)
}

/// Substitutes into every vertex, `pieces[v]` at `v`.
pub fn substitute_all(g: &Graph, pieces: &[Graph]) -> Result<Graph> {
    let map: BTreeMap<usize, Graph> = pieces.iter().cloned().enumerate().collect();
    substitute(g, &map)
}

pub fn substitute_tracked(g: &Graph, assignment: &BTreeMap<usize, Graph>) -> Result<Substituted> {
    let n = g.num_vertices();
    if let Some((&v, _)) = assignment.iter().find(|(&v, _)| v >= n) {
        return Err(Error::InvalidGraph(format!("no vertex {v} to substitute into")));
    }
    if n == 0 {
        return Ok(Substituted {
            graph: g.clone(),
            vertex_origin: Vec::new(),
        });
    }
    let pieces: Vec<Graph> = (0..n)
        .map(|v| {
            let pp = g.vertex(v).profile();
            match assignment.get(&v) {
                None => Ok(Graph::corolla(&pp)),
                Some(h) if h.profile() == pp => Ok(h.clone()),
                Some(h) => Err(Error::SubstitutionProfile {
                    vertex: v,
                    expected: pp.to_string(),
                    found: h.profile().to_string(),
                }),
            }
        })
        .collect::<Result<_>>()?;

    let mut offset = Vec::with_capacity(n);
    let mut vertices = Vec::new();
    let mut vertex_origin = Vec::new();
    for (v, h) in pieces.iter().enumerate() {
        offset.push(vertices.len());
        for (j, w) in h.vertices().iter().enumerate() {
            vertices.push(w.clone());
            vertex_origin.push((v, j));
        }
    }

    // a unit edge substituted into v splices its incoming and outgoing edge
    let inc = g.incidence();
    let passthrough: Vec<bool> = pieces
        .iter()
        .map(|h| h.edges().len() == 1 && matches!(h.edge(0).kind, EdgeKind::ExceptionalEdge))
        .collect();
    let mut uf = UnionFind::new(g.num_edges());
    for v in (0..n).filter(|&v| passthrough[v]) {
        uf.union(inc.in_edges[v][0], inc.out_edges[v][0]);
    }

    let (class, nclass) = uf.classes();
    let mut src_end: Vec<Option<Port>> = vec![None; nclass];
    let mut tgt_end: Vec<Option<Port>> = vec![None; nclass];
    let mut is_leg_in = vec![false; nclass];
    let mut is_leg_out = vec![false; nclass];
    let mut first_edge = vec![usize::MAX; nclass];
    for (i, e) in g.edges().iter().enumerate() {
        let k = class[i];
        first_edge[k] = first_edge[k].min(i);
        match e.source() {
            Some(s) if !passthrough[s.vertex] => {
                let h = &pieces[s.vertex];
                let leg = h.edge(h.out_listing()[s.port]);
                let p = leg.source().expect("output leg of a vertex graph");
                src_end[k] = Some(Port::new(offset[s.vertex] + p.vertex, p.port));
            }
            Some(_) => {}
            None => is_leg_in[k] = true,
        }
        match e.target() {
            Some(t) if !passthrough[t.vertex] => {
                let h = &pieces[t.vertex];
                let leg = h.edge(h.in_listing()[t.port]);
                let p = leg.target().expect("input leg of a vertex graph");
                tgt_end[k] = Some(Port::new(offset[t.vertex] + p.vertex, p.port));
            }
            Some(_) => {}
            None => is_leg_out[k] = true,
        }
    }

    let mut class_order: Vec<usize> = (0..nclass).collect();
    class_order.sort_by_key(|&k| first_edge[k]);
    let mut class_edge = vec![0; nclass];
    let mut edges = Vec::new();
    for &k in &class_order {
        class_edge[k] = edges.len();
        let color = g.edge(first_edge[k]).color;
        let kind = match (src_end[k], tgt_end[k]) {
            (Some(src), Some(tgt)) => EdgeKind::Internal { src, tgt },
            (None, Some(tgt)) => EdgeKind::InputLeg { tgt },
            (Some(src), None) => EdgeKind::OutputLeg { src },
            (None, None) if is_leg_in[k] && is_leg_out[k] => EdgeKind::ExceptionalEdge,
            (None, None) => EdgeKind::ExceptionalLoop,
        };
        edges.push(Edge { color, kind });
    }
    for (v, h) in pieces.iter().enumerate() {
        let off = |p: Port| Port::new(offset[v] + p.vertex, p.port);
        for e in h.edges() {
            match e.kind {
                EdgeKind::Internal { src, tgt } => {
                    edges.push(Edge::internal(e.color, off(src), off(tgt)))
                }
                // only possible when G is a lone vertex without flags
                EdgeKind::ExceptionalLoop => edges.push(e.clone()),
                _ => {}
            }
        }
    }
    let in_listing = g.in_listing().iter().map(|&e| class_edge[class[e]]).collect();
    let out_listing = g.out_listing().iter().map(|&e| class_edge[class[e]]).collect();
    let graph = Graph::new(vertices, edges, in_listing, out_listing)?;
    Ok(Substituted {
        graph,
        vertex_origin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Input,
    Output,
}

/// Grafts a `(c;c)` corolla onto every leg on one side. New vertices are
/// appended in listing order and the new legs take over the listing.
pub fn extend(g: &Graph, side: Side) -> Graph {
    if g.is_exceptional() {
        let e = g.edge(0);
        return match e.kind {
            EdgeKind::ExceptionalEdge => Graph::corolla(&ProfilePair::unary(e.color)),
            _ => g.clone(),
        };
    }
    let mut vertices = g.vertices().to_vec();
    let mut edges = g.edges().to_vec();
    let mut in_listing = g.in_listing().to_vec();
    let mut out_listing = g.out_listing().to_vec();
    let listing = match side {
        Side::Input => &mut in_listing,
        Side::Output => &mut out_listing,
    };
    for slot in listing.iter_mut() {
        let old = *slot;
        let color = edges[old].color;
        let w = vertices.len();
        vertices.push(Vertex::new(vec![color], vec![color]));
        let (grafted, leg) = match edges[old].kind {
            EdgeKind::InputLeg { tgt } => (
                Edge::internal(color, Port::new(w, 0), tgt),
                Edge::input(color, Port::new(w, 0)),
            ),
            EdgeKind::OutputLeg { src } => (
                Edge::internal(color, src, Port::new(w, 0)),
                Edge::output(color, Port::new(w, 0)),
            ),
            _ => unreachable!("listings hold legs"),
        };
        edges[old] = grafted;
        *slot = edges.len();
        edges.push(leg);
    }
    Graph::new_unchecked(vertices, edges, in_listing, out_listing)
}

/// Extends on both sides, inputs first.
pub fn extend_both(g: &Graph) -> Graph {
    extend(&extend(g, Side::Input), Side::Output)
}

/// The result of shrinking one internal edge, with bookkeeping.
#[derive(Debug, Clone)]
pub struct Shrunk {
    pub graph: Graph,
    /// New index of every old vertex.
    pub vertex_map: Vec<usize>,
    /// New index of every old edge; `None` for the shrunk edge.
    pub edge_map: Vec<Option<usize>>,
    /// For each new vertex, the old port behind each input port.
    pub in_origin: Vec<Vec<Port>>,
    pub out_origin: Vec<Vec<Port>>,
}

pub fn shrink(g: &Graph, e: usize) -> Result<Graph> {
    shrink_tracked(g, e).map(|s| s.graph)
}

/// Shrinks an internal edge. A loop is deleted; otherwise the end vertices
/// merge at the smaller index, the emitting vertex's surviving ports coming
/// first on each side.
pub fn shrink_tracked(g: &Graph, e: usize) -> Result<Shrunk> {
    let (src, tgt) = match g.edges().get(e).map(|x| &x.kind) {
        Some(EdgeKind::Internal { src, tgt }) => (*src, *tgt),
        _ => return Err(Error::ShrinkDomain(e)),
    };
    let n = g.num_vertices();
    let ports = |v: usize, count: usize, skip: Option<usize>| -> Vec<Port> {
        (0..count)
            .filter(|&p| Some(p) != skip)
            .map(|p| Port::new(v, p))
            .collect()
    };
    let skip_in = |v: usize| (v == tgt.vertex).then_some(tgt.port);
    let skip_out = |v: usize| (v == src.vertex).then_some(src.port);
    let mut in_origin = Vec::new();
    let mut out_origin = Vec::new();
    let mut vertex_map = vec![0; n];
    if src.vertex == tgt.vertex {
        for v in 0..n {
            vertex_map[v] = v;
            in_origin.push(ports(v, g.vertex(v).inputs.len(), skip_in(v)));
            out_origin.push(ports(v, g.vertex(v).outputs.len(), skip_out(v)));
        }
    } else {
        let (a, b) = (src.vertex, tgt.vertex);
        let (lo, hi) = (a.min(b), a.max(b));
        for v in 0..n {
            if v == hi {
                vertex_map[v] = lo;
                continue;
            }
            vertex_map[v] = if v > hi { v - 1 } else { v };
            if v == lo {
                let mut ins = ports(a, g.vertex(a).inputs.len(), None);
                ins.extend(ports(b, g.vertex(b).inputs.len(), Some(tgt.port)));
                let mut outs = ports(a, g.vertex(a).outputs.len(), Some(src.port));
                outs.extend(ports(b, g.vertex(b).outputs.len(), None));
                in_origin.push(ins);
                out_origin.push(outs);
            } else {
                in_origin.push(ports(v, g.vertex(v).inputs.len(), None));
                out_origin.push(ports(v, g.vertex(v).outputs.len(), None));
            }
        }
    }
    let mut new_in: BTreeMap<Port, Port> = BTreeMap::new();
    let mut new_out: BTreeMap<Port, Port> = BTreeMap::new();
    let mut vertices = Vec::with_capacity(in_origin.len());
    for (u, (ins, outs)) in in_origin.iter().zip(&out_origin).enumerate() {
        for (j, &o) in ins.iter().enumerate() {
            new_in.insert(o, Port::new(u, j));
        }
        for (j, &o) in outs.iter().enumerate() {
            new_out.insert(o, Port::new(u, j));
        }
        vertices.push(Vertex::new(
            ins.iter().map(|o| g.vertex(o.vertex).inputs[o.port]).collect(),
            outs.iter().map(|o| g.vertex(o.vertex).outputs[o.port]).collect(),
        ));
    }
    let mut edges = Vec::with_capacity(g.num_edges() - 1);
    let mut edge_map = vec![None; g.num_edges()];
    for (i, x) in g.edges().iter().enumerate() {
        if i == e {
            continue;
        }
        let kind = match x.kind {
            EdgeKind::Internal { src, tgt } => EdgeKind::Internal {
                src: new_out[&src],
                tgt: new_in[&tgt],
            },
            EdgeKind::InputLeg { tgt } => EdgeKind::InputLeg { tgt: new_in[&tgt] },
            EdgeKind::OutputLeg { src } => EdgeKind::OutputLeg { src: new_out[&src] },
            ref k => k.clone(),
        };
        edge_map[i] = Some(edges.len());
        edges.push(Edge {
            color: x.color,
            kind,
        });
    }
    let relist = |l: &[usize]| l.iter().map(|&i| edge_map[i].expect("legs survive")).collect();
    let graph = Graph::new_unchecked(
        vertices,
        edges,
        relist(g.in_listing()),
        relist(g.out_listing()),
    );
    Ok(Shrunk {
        graph,
        vertex_map,
        edge_map,
        in_origin,
        out_origin,
    })
}

/// `G = (G/E)({H_u})`: the quotient by a set of internal edges and one
/// piece per quotient vertex.
#[derive(Debug, Clone)]
pub struct ShrinkSet {
    pub quotient: Graph,
    pub pieces: Vec<Graph>,
    /// The original vertex behind each vertex of each piece.
    pub piece_vertices: Vec<Vec<usize>>,
    /// Quotient index of every original edge; `None` for edges of `E`.
    pub edge_map: Vec<Option<usize>>,
}

/// Shrinks the edges of `E` one at a time in increasing index order.
pub fn shrink_set(g: &Graph, set: &[usize]) -> Result<ShrinkSet> {
    let mut set: Vec<usize> = set.to_vec();
    set.sort_unstable();
    set.dedup();
    shrink_sequence(g, &set)
}

/// Shrinks distinct internal edges one at a time in the given order.
pub fn shrink_sequence(g: &Graph, set: &[usize]) -> Result<ShrinkSet> {
    let mut seen = vec![false; g.num_edges()];
    for &e in set {
        if e < seen.len() && std::mem::replace(&mut seen[e], true) {
            return Err(Error::ShrinkDomain(e));
        }
    }
    if let Some(&bad) = set.iter().find(|&&e| e >= g.num_edges() || !g.edge(e).is_internal()) {
        return Err(Error::ShrinkDomain(bad));
    }
    let mut current = g.clone();
    let mut edge_map: Vec<Option<usize>> = (0..g.num_edges()).map(Some).collect();
    let mut in_origin: Vec<Vec<Port>> = (0..g.num_vertices())
        .map(|v| (0..g.vertex(v).inputs.len()).map(|p| Port::new(v, p)).collect())
        .collect();
    let mut out_origin: Vec<Vec<Port>> = (0..g.num_vertices())
        .map(|v| (0..g.vertex(v).outputs.len()).map(|p| Port::new(v, p)).collect())
        .collect();
    let mut groups: Vec<Vec<usize>> = (0..g.num_vertices()).map(|v| vec![v]).collect();
    for &e in set {
        let cur = edge_map[e].expect("edges of E survive until shrunk");
        let step = shrink_tracked(&current, cur)?;
        for m in edge_map.iter_mut() {
            *m = m.and_then(|i| step.edge_map[i]);
        }
        let compose = |origin: &Vec<Vec<Port>>, step_origin: &Vec<Vec<Port>>| -> Vec<Vec<Port>> {
            step_origin
                .iter()
                .map(|ps| ps.iter().map(|o| origin[o.vertex][o.port]).collect())
                .collect()
        };
        in_origin = compose(&in_origin, &step.in_origin);
        out_origin = compose(&out_origin, &step.out_origin);
        let mut next = vec![Vec::new(); step.graph.num_vertices()];
        for (old, grp) in groups.into_iter().enumerate() {
            next[step.vertex_map[old]].extend(grp);
        }
        groups = next;
        current = step.graph;
    }
    for grp in &mut groups {
        grp.sort_unstable();
    }

    let mut pieces = Vec::with_capacity(groups.len());
    for (u, grp) in groups.iter().enumerate() {
        let local = |v: usize| grp.binary_search(&v).expect("vertex in its group");
        let lp = |p: Port| Port::new(local(p.vertex), p.port);
        let vertices: Vec<Vertex> = grp.iter().map(|&v| g.vertex(v).clone()).collect();
        let mut edges = Vec::new();
        for &e in set {
            if let EdgeKind::Internal { src, tgt } = g.edge(e).kind {
                if grp.binary_search(&src.vertex).is_ok() {
                    edges.push(Edge::internal(g.edge(e).color, lp(src), lp(tgt)));
                }
            }
        }
        let mut ins = Vec::new();
        for o in &in_origin[u] {
            ins.push(edges.len());
            edges.push(Edge::input(g.vertex(o.vertex).inputs[o.port], lp(*o)));
        }
        let mut outs = Vec::new();
        for o in &out_origin[u] {
            outs.push(edges.len());
            edges.push(Edge::output(g.vertex(o.vertex).outputs[o.port], lp(*o)));
        }
        pieces.push(Graph::new(vertices, edges, ins, outs)?);
    }
    Ok(ShrinkSet {
        quotient: current,
        pieces,
        piece_vertices: groups,
        edge_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{canonical_key, strict_iso};
    use crate::profiles::Color;

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

    fn chain() -> Graph {
        Graph::with_default_listings(
            vec![Vertex::new(vec![C], vec![C]), Vertex::new(vec![C], vec![C])],
            vec![
                Edge::input(C, Port::new(0, 0)),
                Edge::internal(C, Port::new(0, 0), Port::new(1, 0)),
                Edge::output(C, Port::new(1, 0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn walnut_shrinks_to_a_loop() {
        for e in 0..2 {
            let s = shrink(&walnut(), e).unwrap();
            assert_eq!(s.num_vertices(), 1);
            assert_eq!(s.num_edges(), 1);
            assert!(s.edge(0).is_loop());
        }
    }

    #[test]
    fn chain_shrinks_to_unary_corolla() {
        let s = shrink(&chain(), 1).unwrap();
        assert!(strict_iso(&s, &Graph::corolla(&ProfilePair::unary(C)), None).is_some());
        assert_eq!(shrink(&chain(), 0), Err(Error::ShrinkDomain(0)));
    }

    #[test]
    fn loop_shrink_keeps_vertices() {
        let s = shrink(&walnut(), 0).unwrap();
        let t = shrink(&s, 0).unwrap();
        assert_eq!(t.num_vertices(), 1);
        assert_eq!(t.vertex(0).degree(), 0);
    }

    #[test]
    fn corolla_substitution_is_identity() {
        let g = chain();
        let pieces: Vec<Graph> = g.vertices().iter().map(|v| Graph::corolla(&v.profile())).collect();
        assert_eq!(substitute_all(&g, &pieces).unwrap(), g);
    }

    #[test]
    fn unit_edge_deletes_unary_vertex() {
        let g = Graph::corolla(&ProfilePair::unary(C));
        let r = substitute_all(&g, &[Graph::exceptional_edge(C)]).unwrap();
        assert_eq!(r, Graph::exceptional_edge(C));
        let r = substitute_all(&chain(), &[Graph::exceptional_edge(C), Graph::exceptional_edge(C)])
            .unwrap();
        assert_eq!(r, Graph::exceptional_edge(C));
        let looped = shrink(&walnut(), 0).unwrap();
        let r = substitute_all(&looped, &[Graph::exceptional_edge(C)]).unwrap();
        assert_eq!(r, Graph::exceptional_loop(C));
    }

    #[test]
    fn profile_mismatch_is_reported() {
        let g = chain();
        let bad = Graph::corolla(&ProfilePair::new(vec![C, C], vec![C]));
        assert!(matches!(
            substitute_all(&g, &[bad, Graph::corolla(&ProfilePair::unary(C))]),
            Err(Error::SubstitutionProfile { vertex: 0, .. })
        ));
    }

    #[test]
    fn extension_grafts_one_vertex_per_leg() {
        let pp = ProfilePair::new(vec![C, Color(1)], vec![Color(2)]);
        let g = Graph::corolla(&pp);
        let spider = extend_both(&g);
        assert_eq!(spider.num_vertices(), 4);
        assert_eq!(spider.profile(), pp);
        let closed = walnut();
        assert_eq!(extend(&closed, Side::Input), closed);
    }

    #[test]
    fn shrink_set_round_trips() {
        let g = walnut();
        let ss = shrink_set(&g, &[0]).unwrap();
        assert_eq!(ss.quotient.num_vertices(), 1);
        assert_eq!(ss.pieces[0].num_vertices(), 2);
        let back = substitute_all(&ss.quotient, &ss.pieces).unwrap();
        assert!(strict_iso(&back, &g, None).is_some());
        let full = shrink_set(&chain(), &[1]).unwrap();
        assert_eq!(full.quotient.num_vertices(), 1);
        assert!(strict_iso(&full.pieces[0], &chain(), None).is_some());
    }

    #[test]
    fn shrink_order_is_irrelevant_up_to_weak_iso() {
        let g = extend_both(&Graph::corolla(&ProfilePair::new(vec![C, C], vec![C])));
        let inner = g.internal_edges();
        let a = shrink(&shrink(&g, inner[0]).unwrap(), inner[1] - 1).unwrap();
        let b = shrink(&shrink(&g, inner[1]).unwrap(), inner[0]).unwrap();
        assert_eq!(canonical_key(&a, &[]), canonical_key(&b, &[]));
    }
}
