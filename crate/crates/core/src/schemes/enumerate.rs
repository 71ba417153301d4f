//! Bounded enumeration of graphs up to weak isomorphism.
//!
//! Graphs grow one vertex at a time: the new vertex takes over some legs of
//! a smaller graph, may carry loops, and leaves its other ports as legs.
//! Every connected graph has a vertex whose removal keeps it connected, so
//! every graph within the bound is reached from one with fewer vertices.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{canonical_form, Edge, EdgeKind, Graph, IsoClassKey, Port, Vertex};
use crate::profiles::{Color, Profile, ProfilePair};

/// Size limits for exhaustive checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub max_vertices: usize,
    /// Maximum total number of vertex ports.
    pub max_flags: usize,
    pub colors: usize,
}

impl Default for Bound {
    fn default() -> Self {
        Bound {
            max_vertices: 4,
            max_flags: 10,
            colors: 1,
        }
    }
}

impl Bound {
    pub fn new(max_vertices: usize, max_flags: usize, colors: usize) -> Self {
        Bound {
            max_vertices,
            max_flags,
            colors,
        }
    }

    pub fn admits(&self, g: &Graph) -> bool {
        g.num_vertices() <= self.max_vertices
            && g.num_flags() <= self.max_flags
            && g.edges().iter().all(|e| e.color.index() < self.colors)
    }
}

pub type VertexFilter = Arc<dyn Fn(&ProfilePair) -> bool + Send + Sync>;

/// What to enumerate: the bound, the allowed vertex profiles, and
/// hereditary shape restrictions used for pruning.
#[derive(Clone)]
pub struct Universe {
    pub bound: Bound,
    pub vertex_ok: VertexFilter,
    pub forest: bool,
    pub acyclic: bool,
    pub exceptional_loops: bool,
}

impl std::fmt::Debug for Universe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Universe")
            .field("bound", &self.bound)
            .field("forest", &self.forest)
            .field("acyclic", &self.acyclic)
            .field("exceptional_loops", &self.exceptional_loops)
            .finish()
    }
}

impl Universe {
    pub fn all(bound: Bound) -> Self {
        Universe {
            bound,
            vertex_ok: Arc::new(|_| true),
            forest: false,
            acyclic: false,
            exceptional_loops: true,
        }
    }

    /// Only vertices whose profile is, up to reordering, one of `types`.
    pub fn with_vertex_types(bound: Bound, types: &[ProfilePair]) -> Self {
        let keys: Vec<ProfilePair> = types.iter().map(ProfilePair::orbit_key).collect();
        Universe {
            vertex_ok: Arc::new(move |p| keys.contains(&p.orbit_key())),
            ..Universe::all(bound)
        }
    }

    fn keeps(&self, g: &Graph) -> bool {
        (!self.forest || g.cycle_rank() == 0) && (!self.acyclic || !g.has_directed_cycle())
    }
}

/// All multisets of `colors` colors of size `n`, as sorted profiles.
pub fn color_multisets(colors: usize, n: usize) -> Vec<Profile> {
    (0..colors as u32)
        .map(Color)
        .combinations_with_replacement(n)
        .map(Profile)
        .collect()
}

/// Orbit representatives of all profile pairs of total arity `≤ max`.
pub fn profile_orbits(colors: usize, max: usize) -> Vec<ProfilePair> {
    let mut out = Vec::new();
    for total in 0..=max {
        for i in 0..=total {
            for ins in color_multisets(colors, i) {
                for outs in color_multisets(colors, total - i) {
                    out.push(ProfilePair::new(ins.clone(), outs));
                }
            }
        }
    }
    out
}

/// Canonical representatives of every graph in the universe, sorted by
/// vertex count, flag count and key.
pub fn enumerate_graphs(universe: &Universe, budget: &Budget) -> Result<Vec<(IsoClassKey, Graph)>> {
    let bound = universe.bound;
    let types: Vec<ProfilePair> = profile_orbits(bound.colors, bound.max_flags)
        .into_iter()
        .filter(|p| (universe.vertex_ok)(p))
        .collect();
    let mut all: Vec<(IsoClassKey, Graph)> = Vec::new();
    for c in (0..bound.colors as u32).map(Color) {
        for g in [Graph::exceptional_edge(c), Graph::exceptional_loop(c)] {
            if g.has_exceptional_loop() && !(universe.exceptional_loops && !universe.forest && !universe.acyclic) {
                continue;
            }
            all.push((canonical_form(&g, &[]).key, g));
        }
    }
    if bound.max_vertices == 0 {
        return Ok(all);
    }
    let mut level: BTreeMap<IsoClassKey, Graph> = BTreeMap::new();
    for t in &types {
        for g in single_vertex_graphs(t) {
            if universe.keeps(&g) {
                let c = canonical_form(&g, &[]);
                level.insert(c.key, c.rep);
            }
        }
    }
    let mut count = all.len() + level.len();
    for n in 1..=bound.max_vertices {
        let current: Vec<Graph> = level.values().cloned().collect();
        all.extend(std::mem::take(&mut level));
        if n == bound.max_vertices {
            break;
        }
        let grown: Vec<Vec<(IsoClassKey, Graph)>> = current
            .par_iter()
            .map(|g| {
                let room = bound.max_flags - g.num_flags();
                let mut out = Vec::new();
                for t in types.iter().filter(|t| t.arity() <= room) {
                    for h in extensions(g, t) {
                        if universe.keeps(&h) {
                            let c = canonical_form(&h, &[]);
                            out.push((c.key, c.rep));
                        }
                    }
                }
                out
            })
            .collect();
        for (k, g) in grown.into_iter().flatten() {
            level.entry(k).or_insert(g);
        }
        count += level.len();
        if count > budget.enumeration_cap {
            return Err(Error::Budget(format!(
                "graph enumeration exceeded {} graphs",
                budget.enumeration_cap
            )));
        }
    }
    all.sort_by(|a, b| {
        (a.1.num_vertices(), a.1.num_flags(), &a.0).cmp(&(b.1.num_vertices(), b.1.num_flags(), &b.0))
    });
    Ok(all)
}

fn count_color(p: &Profile, c: Color) -> usize {
    p.0.iter().filter(|&&x| x == c).count()
}

/// One-vertex graphs of the given vertex type, one per choice of loop
/// counts per color.
fn single_vertex_graphs(t: &ProfilePair) -> Vec<Graph> {
    let colors: Vec<Color> = t.inputs.0.iter().copied().sorted().dedup().collect();
    let ranges: Vec<Vec<usize>> = colors
        .iter()
        .map(|&c| (0..=count_color(&t.inputs, c).min(count_color(&t.outputs, c))).collect())
        .collect();
    let loop_choices: Vec<Vec<usize>> = if ranges.is_empty() {
        vec![Vec::new()]
    } else {
        ranges.into_iter().multi_cartesian_product().collect()
    };
    loop_choices
        .into_iter()
        .map(|loops| {
            let mut b = Builder::new(Vec::new(), Vec::new(), t);
            for (&c, &l) in colors.iter().zip(&loops) {
                for _ in 0..l {
                    b.add_loop(c);
                }
            }
            b.finish()
        })
        .collect()
}

/// Attaches a new vertex of type `t` to `g` in every way that touches at
/// least one leg.
fn extensions(g: &Graph, t: &ProfilePair) -> Vec<Graph> {
    // legs grouped by (vertex, color); legs in a group are interchangeable
    let mut in_groups: BTreeMap<(usize, Color), Vec<usize>> = BTreeMap::new();
    let mut out_groups: BTreeMap<(usize, Color), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        match e.kind {
            EdgeKind::InputLeg { tgt } => in_groups.entry((tgt.vertex, e.color)).or_default().push(i),
            EdgeKind::OutputLeg { src } => out_groups.entry((src.vertex, e.color)).or_default().push(i),
            _ => {}
        }
    }
    let in_groups: Vec<_> = in_groups.into_iter().collect();
    let out_groups: Vec<_> = out_groups.into_iter().collect();
    // the new vertex feeds graph inputs with its outputs, and vice versa
    let feed = bounded_choices(&in_groups, &t.outputs);
    let take = bounded_choices(&out_groups, &t.inputs);
    let mut out = Vec::new();
    for f in &feed {
        for k in &take {
            if f.iter().sum::<usize>() + k.iter().sum::<usize>() == 0 {
                continue;
            }
            let mut attached_in: BTreeMap<usize, Color> = BTreeMap::new();
            let mut attached_out: BTreeMap<usize, Color> = BTreeMap::new();
            for (((_, c), legs), &n) in in_groups.iter().zip(f) {
                for &leg in &legs[..n] {
                    attached_in.insert(leg, *c);
                }
            }
            for (((_, c), legs), &n) in out_groups.iter().zip(k) {
                for &leg in &legs[..n] {
                    attached_out.insert(leg, *c);
                }
            }
            let mut rest_in = t.inputs.0.clone();
            let mut rest_out = t.outputs.0.clone();
            for c in attached_out.values() {
                let i = rest_in.iter().position(|x| x == c).expect("color available");
                rest_in.remove(i);
            }
            for c in attached_in.values() {
                let i = rest_out.iter().position(|x| x == c).expect("color available");
                rest_out.remove(i);
            }
            let colors: Vec<Color> = rest_in.iter().copied().sorted().dedup().collect();
            let ranges: Vec<Vec<usize>> = colors
                .iter()
                .map(|&c| {
                    let a = rest_in.iter().filter(|&&x| x == c).count();
                    let b = rest_out.iter().filter(|&&x| x == c).count();
                    (0..=a.min(b)).collect()
                })
                .collect();
            let loop_choices: Vec<Vec<usize>> = if ranges.is_empty() {
                vec![Vec::new()]
            } else {
                ranges.into_iter().multi_cartesian_product().collect()
            };
            for loops in loop_choices {
                let mut b = Builder::new(g.vertices().to_vec(), g.edges().to_vec(), t);
                for (&leg, &c) in &attached_in {
                    b.feed_leg(leg, c);
                }
                for (&leg, &c) in &attached_out {
                    b.take_leg(leg, c);
                }
                for (&c, &l) in colors.iter().zip(&loops) {
                    for _ in 0..l {
                        b.add_loop(c);
                    }
                }
                out.push(b.finish());
            }
        }
    }
    out
}

/// Per group, how many of its legs to attach, subject to per-color
/// capacity given by `ports`.
fn bounded_choices(groups: &[((usize, Color), Vec<usize>)], ports: &Profile) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(groups.len());
    let mut used: BTreeMap<Color, usize> = BTreeMap::new();
    fn rec(
        i: usize,
        groups: &[((usize, Color), Vec<usize>)],
        ports: &Profile,
        current: &mut Vec<usize>,
        used: &mut BTreeMap<Color, usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == groups.len() {
            out.push(current.clone());
            return;
        }
        let ((_, c), legs) = &groups[i];
        let cap = count_color(ports, *c) - used.get(c).copied().unwrap_or(0);
        for n in 0..=legs.len().min(cap) {
            current.push(n);
            *used.entry(*c).or_default() += n;
            rec(i + 1, groups, ports, current, used, out);
            *used.get_mut(c).expect("just inserted") -= n;
            current.pop();
        }
    }
    rec(0, groups, ports, &mut current, &mut used, &mut out);
    out
}

/// Incrementally wires a new vertex of a fixed type into a graph.
struct Builder {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    w: usize,
    free_in: Vec<bool>,
    free_out: Vec<bool>,
}

impl Builder {
    fn new(mut vertices: Vec<Vertex>, edges: Vec<Edge>, t: &ProfilePair) -> Self {
        let w = vertices.len();
        let ins = t.inputs.0.iter().copied().sorted().collect_vec();
        let outs = t.outputs.0.iter().copied().sorted().collect_vec();
        let free_in = vec![true; ins.len()];
        let free_out = vec![true; outs.len()];
        vertices.push(Vertex::new(ins, outs));
        Builder {
            vertices,
            edges,
            w,
            free_in,
            free_out,
        }
    }

    fn next_in(&mut self, c: Color) -> Port {
        let v = &self.vertices[self.w];
        let p = (0..v.inputs.len())
            .find(|&p| self.free_in[p] && v.inputs[p] == c)
            .expect("free input port");
        self.free_in[p] = false;
        Port::new(self.w, p)
    }

    fn next_out(&mut self, c: Color) -> Port {
        let v = &self.vertices[self.w];
        let p = (0..v.outputs.len())
            .find(|&p| self.free_out[p] && v.outputs[p] == c)
            .expect("free output port");
        self.free_out[p] = false;
        Port::new(self.w, p)
    }

    /// An input leg of the old graph becomes an edge from the new vertex.
    fn feed_leg(&mut self, leg: usize, c: Color) {
        let EdgeKind::InputLeg { tgt } = self.edges[leg].kind else {
            unreachable!("input leg expected")
        };
        let src = self.next_out(c);
        self.edges[leg] = Edge::internal(c, src, tgt);
    }

    /// An output leg of the old graph becomes an edge into the new vertex.
    fn take_leg(&mut self, leg: usize, c: Color) {
        let EdgeKind::OutputLeg { src } = self.edges[leg].kind else {
            unreachable!("output leg expected")
        };
        let tgt = self.next_in(c);
        self.edges[leg] = Edge::internal(c, src, tgt);
    }

    fn add_loop(&mut self, c: Color) {
        let src = self.next_out(c);
        let tgt = self.next_in(c);
        self.edges.push(Edge::internal(c, src, tgt));
    }

    fn finish(mut self) -> Graph {
        let v = self.vertices[self.w].clone();
        for p in 0..v.inputs.len() {
            if self.free_in[p] {
                self.edges.push(Edge::input(v.inputs[p], Port::new(self.w, p)));
            }
        }
        for p in 0..v.outputs.len() {
            if self.free_out[p] {
                self.edges.push(Edge::output(v.outputs[p], Port::new(self.w, p)));
            }
        }
        Graph::with_default_listings(self.vertices, self.edges).expect("grown graphs are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_vertex_unary_graphs() {
        let bound = Bound::new(1, 2, 1);
        let u = Universe::with_vertex_types(bound, &[ProfilePair::unary(Color(0))]);
        let gs = enumerate_graphs(&u, &Budget::default()).unwrap();
        // ↑, ↻, the unary corolla and the unary vertex with a loop
        assert_eq!(gs.len(), 4);
    }

    #[test]
    fn linear_chains_up_to_three() {
        let bound = Bound::new(3, 6, 1);
        let u = Universe {
            forest: true,
            ..Universe::with_vertex_types(bound, &[ProfilePair::unary(Color(0))])
        };
        let gs = enumerate_graphs(&u, &Budget::default()).unwrap();
        // ↑ plus one chain per length
        assert_eq!(gs.len(), 4);
    }

    #[test]
    fn profile_orbit_count() {
        assert_eq!(profile_orbits(1, 2).len(), 6);
        assert_eq!(profile_orbits(2, 1).len(), 5);
    }
}
