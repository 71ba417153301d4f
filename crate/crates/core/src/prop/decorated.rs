//! Graphs whose vertices carry labels from an [`Alphabet`], compared up to
//! listing-preserving isomorphism that transports labels along port maps.

use std::collections::BTreeMap;

use itertools::Itertools;

use super::collection::Alphabet;
use super::sigma::StabGroup;
use crate::error::Result;
use crate::graph::{EdgeKind, Graph};
use crate::ops::substitute_tracked;
use crate::profiles::ProfilePair;

/// A graph with sorted vertex profiles and one label per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decorated {
    pub graph: Graph,
    pub labels: Vec<usize>,
}

/// Complete invariant of a decorated graph up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecKey(pub Vec<u64>);

impl Decorated {
    pub fn corolla(profile: &ProfilePair, label: usize) -> Self {
        Decorated {
            graph: Graph::corolla(profile),
            labels: vec![label],
        }
    }

    pub fn undecorated(graph: Graph) -> Self {
        debug_assert_eq!(graph.num_vertices(), 0);
        Decorated {
            graph,
            labels: Vec::new(),
        }
    }

    pub fn profile(&self) -> ProfilePair {
        self.graph.profile()
    }

    /// The leg at listing position `j` moves to `σ(j)`.
    pub fn move_listing(&self, stab: &StabGroup, g: usize) -> Decorated {
        Decorated {
            graph: stab.move_listing(&self.graph, g),
            labels: self.labels.clone(),
        }
    }

    /// Substitutes `pieces[v]` into every vertex `v` of `g`.
    pub fn substitute(g: &Graph, pieces: &[Decorated]) -> Result<Decorated> {
        let assignment: BTreeMap<usize, Graph> =
            pieces.iter().enumerate().map(|(v, p)| (v, p.graph.clone())).collect();
        let s = substitute_tracked(g, &assignment)?;
        let labels = s.vertex_origin.iter().map(|&(v, j)| pieces[v].labels[j]).collect();
        Ok(Decorated {
            graph: s.graph,
            labels,
        })
    }

    /// Replaces vertex `v` by `piece`, keeping every other vertex.
    pub fn substitute_at(&self, v: usize, piece: &Decorated) -> Result<Decorated> {
        let assignment = BTreeMap::from([(v, piece.graph.clone())]);
        let s = substitute_tracked(&self.graph, &assignment)?;
        let labels = s
            .vertex_origin
            .iter()
            .map(|&(u, j)| if u == v { piece.labels[j] } else { self.labels[u] })
            .collect();
        Ok(Decorated {
            graph: s.graph,
            labels,
        })
    }

    /// Moves each vertex's ports so its label is least in its orbit, then
    /// minimizes the strict code over the remaining label stabilizers.
    pub fn key(&self, alpha: &Alphabet) -> DecKey {
        let mut g = self.graph.clone();
        let mut labels = self.labels.clone();
        let mut residual: Vec<Vec<usize>> = Vec::with_capacity(labels.len());
        for v in 0..labels.len() {
            let info = alpha.info(labels[v]);
            let stab = &info.entry.stab;
            let (best, g0) = stab
                .group
                .elements()
                .map(|h| (alpha.act(labels[v], h), h))
                .min()
                .expect("groups are nonempty");
            g = stab.move_ports(&g, v, g0);
            labels[v] = best;
            residual.push(stab.group.elements().filter(|&h| alpha.act(best, h) == best).collect());
        }
        if residual.iter().all(|r| r.len() == 1) {
            return DecKey(strict_code(&g, &labels));
        }
        residual
            .iter()
            .map(|r| r.iter().copied())
            .multi_cartesian_product()
            .map(|choice| {
                let mut h = g.clone();
                for (v, &e) in choice.iter().enumerate() {
                    if e != alpha.info(labels[v]).entry.stab.group.identity() {
                        h = alpha.info(labels[v]).entry.stab.move_ports(&h, v, e);
                    }
                }
                strict_code(&h, &labels)
            })
            .min()
            .map(DecKey)
            .unwrap_or_else(|| DecKey(strict_code(&g, &labels)))
    }
}

const LEG: u64 = u64::MAX;

/// A complete invariant of graphs with vertex labels up to isomorphisms
/// preserving port orders, listings and labels: components are traversed
/// from every start vertex and the least encoding kept.
pub fn strict_code(g: &Graph, labels: &[usize]) -> Vec<u64> {
    if g.num_vertices() == 0 {
        return g
            .edges()
            .iter()
            .map(|e| {
                let kind = if matches!(e.kind, EdgeKind::ExceptionalEdge) { 0 } else { 1 };
                (LEG - 1 - kind) ^ ((e.color.0 as u64) << 8)
            })
            .sorted()
            .collect();
    }
    let inc = g.incidence();
    let mut in_pos = vec![usize::MAX; g.num_edges()];
    let mut out_pos = vec![usize::MAX; g.num_edges()];
    for (i, &e) in g.in_listing().iter().enumerate() {
        in_pos[e] = i;
    }
    for (i, &e) in g.out_listing().iter().enumerate() {
        out_pos[e] = i;
    }
    let traverse = |start: usize, seen: &mut Vec<bool>| -> Vec<u64> {
        let mut id = vec![usize::MAX; g.num_vertices()];
        let mut order = vec![start];
        id[start] = 0;
        let mut code = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            seen[u] = true;
            i += 1;
            let vx = g.vertex(u);
            code.extend([labels[u] as u64, vx.inputs.len() as u64, vx.outputs.len() as u64]);
            for (ports, incoming) in [(&inc.in_edges[u], true), (&inc.out_edges[u], false)] {
                for &e in ports.iter() {
                    let edge = g.edge(e);
                    code.push(edge.color.0 as u64);
                    let far = if incoming { edge.source() } else { edge.target() };
                    match far {
                        None => {
                            code.push(LEG);
                            code.push(if incoming { in_pos[e] } else { out_pos[e] } as u64);
                        }
                        Some(p) => {
                            if id[p.vertex] == usize::MAX {
                                id[p.vertex] = order.len();
                                order.push(p.vertex);
                            }
                            code.push(id[p.vertex] as u64);
                            code.push(p.port as u64);
                        }
                    }
                }
            }
        }
        code
    };
    let mut component = vec![usize::MAX; g.num_vertices()];
    let mut comps: Vec<Vec<u64>> = Vec::new();
    for v in 0..g.num_vertices() {
        if component[v] != usize::MAX {
            continue;
        }
        let mut seen = vec![false; g.num_vertices()];
        let first = traverse(v, &mut seen);
        let members: Vec<usize> = (0..g.num_vertices()).filter(|&u| seen[u]).collect();
        for &u in &members {
            component[u] = comps.len();
        }
        let best = members
            .iter()
            .map(|&u| if u == v { first.clone() } else { traverse(u, &mut vec![false; g.num_vertices()]) })
            .min()
            .expect("a component has a vertex");
        comps.push(best);
    }
    comps.sort();
    let mut out = Vec::new();
    for c in comps {
        out.push(c.len() as u64);
        out.extend(c);
    }
    // exceptional loops alongside vertices cannot occur in valid graphs
    out
}

#[cfg(test)]
mod tests {
    use super::super::collection::{Collection, EntrySet};
    use super::*;
    use crate::profiles::Color;

    fn binary_alphabet() -> (Alphabet, ProfilePair) {
        let c = Color(0);
        let p = ProfilePair::new(vec![c, c], vec![c]);
        let mut z = Collection::new();
        z.insert(EntrySet::free(&p, &["mu".into()])).unwrap();
        (Alphabet::new(vec![z]), p)
    }

    #[test]
    fn moving_ports_with_the_label_is_invisible() {
        let (alpha, p) = binary_alphabet();
        let stab = StabGroup::new(&p);
        let d = Decorated::corolla(&p, 0);
        let moved = Decorated {
            graph: stab.move_ports(&d.graph, 0, 1),
            labels: vec![alpha.act(0, 1)],
        };
        assert_eq!(d.key(&alpha), moved.key(&alpha));
        assert_ne!(d.key(&alpha), Decorated::corolla(&p, 1).key(&alpha));
    }

    #[test]
    fn listing_move_matches_label_action() {
        let (alpha, p) = binary_alphabet();
        let stab = StabGroup::new(&p);
        let d = Decorated::corolla(&p, 0);
        assert_eq!(d.move_listing(&stab, 1).key(&alpha), Decorated::corolla(&p, 1).key(&alpha));
    }
}
