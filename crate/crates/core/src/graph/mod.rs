//! Colored wheeled graphs.
//!
//! A vertex carries ordered, colored input and output ports; the port order
//! is the vertex listing. Every port is the endpoint of exactly one edge.
//! Legs are edges with one free end, and the two exceptional graphs (the
//! unit edge `↑_c` and the closed loop `↻_c`) have no vertices at all.

mod canon;
mod json;
mod strict;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{Color, Profile, ProfilePair};

pub use canon::{
    automorphisms, canonical_form, canonical_key, weak_iso, Automorphism, Canon, IsoClassKey,
    Isomorphism,
};
pub use json::{EdgeJson, GraphJson};
pub use strict::strict_iso;

/// A port of a vertex: which vertex, and the position in its input or
/// output listing (the side is implied by context).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Port {
    pub vertex: usize,
    pub port: usize,
}

impl Port {
    pub fn new(vertex: usize, port: usize) -> Self {
        Port { vertex, port }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    /// From an output port to an input port; `src.vertex == tgt.vertex` is a loop.
    Internal { src: Port, tgt: Port },
    /// A graph input ending at a vertex input port.
    InputLeg { tgt: Port },
    /// A graph output leaving a vertex output port.
    OutputLeg { src: Port },
    /// The whole graph `↑_c`.
    ExceptionalEdge,
    /// The whole graph `↻_c`.
    ExceptionalLoop,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub color: Color,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn internal(color: Color, src: Port, tgt: Port) -> Self {
        Edge {
            color,
            kind: EdgeKind::Internal { src, tgt },
        }
    }

    pub fn input(color: Color, tgt: Port) -> Self {
        Edge {
            color,
            kind: EdgeKind::InputLeg { tgt },
        }
    }

    pub fn output(color: Color, src: Port) -> Self {
        Edge {
            color,
            kind: EdgeKind::OutputLeg { src },
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self.kind, EdgeKind::Internal { .. })
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.kind, EdgeKind::Internal { src, tgt } if src.vertex == tgt.vertex)
    }

    /// The vertex (if any) whose output port this edge leaves.
    pub fn source(&self) -> Option<Port> {
        match self.kind {
            EdgeKind::Internal { src, .. } | EdgeKind::OutputLeg { src } => Some(src),
            _ => None,
        }
    }

    /// The vertex (if any) whose input port this edge enters.
    pub fn target(&self) -> Option<Port> {
        match self.kind {
            EdgeKind::Internal { tgt, .. } | EdgeKind::InputLeg { tgt } => Some(tgt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Vertex {
    pub inputs: Vec<Color>,
    pub outputs: Vec<Color>,
}

impl Vertex {
    pub fn new(inputs: Vec<Color>, outputs: Vec<Color>) -> Self {
        Vertex { inputs, outputs }
    }

    pub fn profile(&self) -> ProfilePair {
        ProfilePair::new(self.inputs.clone(), self.outputs.clone())
    }

    pub fn degree(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }
}

/// A connected, nonempty, colored wheeled graph with listings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    in_listing: Vec<usize>,
    out_listing: Vec<usize>,
}

/// For each vertex, the edge at each input and output port.
#[derive(Debug, Clone)]
pub struct Incidence {
    pub in_edges: Vec<Vec<usize>>,
    pub out_edges: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds and validates a graph.
    pub fn new(
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        in_listing: Vec<usize>,
        out_listing: Vec<usize>,
    ) -> Result<Self> {
        let g = Graph {
            vertices,
            edges,
            in_listing,
            out_listing,
        };
        g.validate()?;
        Ok(g)
    }

    /// Builds a graph whose listings enumerate the legs in edge order.
    pub fn with_default_listings(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let ins = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.kind, EdgeKind::InputLeg { .. } | EdgeKind::ExceptionalEdge))
            .map(|(i, _)| i)
            .collect();
        let outs = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.kind, EdgeKind::OutputLeg { .. } | EdgeKind::ExceptionalEdge))
            .map(|(i, _)| i)
            .collect();
        Graph::new(vertices, edges, ins, outs)
    }

    pub(crate) fn new_unchecked(
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        in_listing: Vec<usize>,
        out_listing: Vec<usize>,
    ) -> Self {
        let g = Graph {
            vertices,
            edges,
            in_listing,
            out_listing,
        };
        debug_assert!(g.validate().is_ok(), "{:?}", g.validate());
        g
    }

    /// The standard corolla: one vertex, every flag a leg, graph listing
    /// equal to the vertex listing.
    pub fn corolla(pp: &ProfilePair) -> Graph {
        let v = Vertex::new(pp.inputs.0.clone(), pp.outputs.0.clone());
        let mut edges = Vec::new();
        for (i, &c) in pp.inputs.0.iter().enumerate() {
            edges.push(Edge::input(c, Port::new(0, i)));
        }
        for (i, &c) in pp.outputs.0.iter().enumerate() {
            edges.push(Edge::output(c, Port::new(0, i)));
        }
        let m = pp.inputs.len();
        let n = pp.outputs.len();
        Graph::new_unchecked(vec![v], edges, (0..m).collect(), (m..m + n).collect())
    }

    /// `↑_c`.
    pub fn exceptional_edge(c: Color) -> Graph {
        Graph::new_unchecked(
            Vec::new(),
            vec![Edge {
                color: c,
                kind: EdgeKind::ExceptionalEdge,
            }],
            vec![0],
            vec![0],
        )
    }

    /// `↻_c`.
    pub fn exceptional_loop(c: Color) -> Graph {
        Graph::new_unchecked(
            Vec::new(),
            vec![Edge {
                color: c,
                kind: EdgeKind::ExceptionalLoop,
            }],
            Vec::new(),
            Vec::new(),
        )
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn in_listing(&self) -> &[usize] {
        &self.in_listing
    }

    pub fn out_listing(&self) -> &[usize] {
        &self.out_listing
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Total number of vertex ports (flags attached to vertices).
    pub fn num_flags(&self) -> usize {
        self.vertices.iter().map(Vertex::degree).sum()
    }

    pub fn is_exceptional(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_exceptional_loop(&self) -> bool {
        self.edges
            .iter()
            .any(|e| matches!(e.kind, EdgeKind::ExceptionalLoop))
    }

    /// Indices of the ordinary internal edges (loops included).
    pub fn internal_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].is_internal())
            .collect()
    }

    /// Input and output colors of the graph in listing order.
    pub fn profile(&self) -> ProfilePair {
        ProfilePair {
            inputs: Profile(self.in_listing.iter().map(|&e| self.edges[e].color).collect()),
            outputs: Profile(self.out_listing.iter().map(|&e| self.edges[e].color).collect()),
        }
    }

    pub fn incidence(&self) -> Incidence {
        let mut in_edges: Vec<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| vec![usize::MAX; v.inputs.len()])
            .collect();
        let mut out_edges: Vec<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| vec![usize::MAX; v.outputs.len()])
            .collect();
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(t) = e.target() {
                in_edges[t.vertex][t.port] = i;
            }
            if let Some(s) = e.source() {
                out_edges[s.vertex][s.port] = i;
            }
        }
        Incidence { in_edges, out_edges }
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGraph(m));
        if self.edges.is_empty() && self.vertices.is_empty() {
            return bad("the graph is empty".into());
        }
        let nv = self.vertices.len();
        let exceptional = self
            .edges
            .iter()
            .filter(|e| matches!(e.kind, EdgeKind::ExceptionalEdge | EdgeKind::ExceptionalLoop))
            .count();
        if exceptional > 0 {
            if nv > 0 || self.edges.len() != 1 {
                return bad("exceptional edges only occur as the whole graph".into());
            }
            let e = &self.edges[0];
            let (ins, outs) = match e.kind {
                EdgeKind::ExceptionalEdge => (vec![0], vec![0]),
                _ => (vec![], vec![]),
            };
            if self.in_listing != ins || self.out_listing != outs {
                return bad("listings of an exceptional graph are fixed".into());
            }
            return Ok(());
        }
        if nv == 0 {
            return bad("a graph without vertices must be exceptional".into());
        }
        let mut seen_in: Vec<Vec<bool>> = self
            .vertices
            .iter()
            .map(|v| vec![false; v.inputs.len()])
            .collect();
        let mut seen_out: Vec<Vec<bool>> = self
            .vertices
            .iter()
            .map(|v| vec![false; v.outputs.len()])
            .collect();
        for (i, e) in self.edges.iter().enumerate() {
            if let Some(t) = e.target() {
                if t.vertex >= nv || t.port >= self.vertices[t.vertex].inputs.len() {
                    return bad(format!("edge {i} targets a missing port"));
                }
                if std::mem::replace(&mut seen_in[t.vertex][t.port], true) {
                    return bad(format!("input port {t:?} used twice"));
                }
                if self.vertices[t.vertex].inputs[t.port] != e.color {
                    return bad(format!("edge {i} color differs from its target port"));
                }
            }
            if let Some(s) = e.source() {
                if s.vertex >= nv || s.port >= self.vertices[s.vertex].outputs.len() {
                    return bad(format!("edge {i} leaves a missing port"));
                }
                if std::mem::replace(&mut seen_out[s.vertex][s.port], true) {
                    return bad(format!("output port {s:?} used twice"));
                }
                if self.vertices[s.vertex].outputs[s.port] != e.color {
                    return bad(format!("edge {i} color differs from its source port"));
                }
            }
        }
        if seen_in.iter().flatten().chain(seen_out.iter().flatten()).any(|b| !b) {
            return bad("some vertex port has no edge".into());
        }
        let in_legs: BTreeSet<usize> = (0..self.edges.len())
            .filter(|&i| matches!(self.edges[i].kind, EdgeKind::InputLeg { .. }))
            .collect();
        let out_legs: BTreeSet<usize> = (0..self.edges.len())
            .filter(|&i| matches!(self.edges[i].kind, EdgeKind::OutputLeg { .. }))
            .collect();
        let listed_in: BTreeSet<usize> = self.in_listing.iter().copied().collect();
        let listed_out: BTreeSet<usize> = self.out_listing.iter().copied().collect();
        if listed_in.len() != self.in_listing.len() || listed_in != in_legs {
            return bad("the input listing must enumerate the input legs once each".into());
        }
        if listed_out.len() != self.out_listing.len() || listed_out != out_legs {
            return bad("the output listing must enumerate the output legs once each".into());
        }
        if !self.is_connected() {
            return bad("the graph is not connected".into());
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n <= 1 {
            return true;
        }
        let mut uf = UnionFind::new(n);
        for e in &self.edges {
            if let EdgeKind::Internal { src, tgt } = e.kind {
                uf.union(src.vertex, tgt.vertex);
            }
        }
        (1..n).all(|v| uf.find(v) == uf.find(0))
    }

    /// The same graph with its graph listing replaced.
    pub fn with_listings(&self, in_listing: Vec<usize>, out_listing: Vec<usize>) -> Result<Graph> {
        Graph::new(self.vertices.clone(), self.edges.clone(), in_listing, out_listing)
    }

    /// Relists the graph legs: new input position `j` is old position `in_perm[j]`.
    pub fn relisted(&self, in_perm: &[usize], out_perm: &[usize]) -> Graph {
        let ins = in_perm.iter().map(|&j| self.in_listing[j]).collect();
        let outs = out_perm.iter().map(|&j| self.out_listing[j]).collect();
        Graph::new_unchecked(self.vertices.clone(), self.edges.clone(), ins, outs)
    }

    /// Relists the ports of vertex `v`: new input position `j` is old
    /// position `in_perm[j]`, likewise for outputs.
    pub fn relist_vertex(&self, v: usize, in_perm: &[usize], out_perm: &[usize]) -> Graph {
        let mut g = self.clone();
        let old = &self.vertices[v];
        let mut in_pos = vec![0; in_perm.len()];
        let mut out_pos = vec![0; out_perm.len()];
        for (j, &old_j) in in_perm.iter().enumerate() {
            in_pos[old_j] = j;
        }
        for (j, &old_j) in out_perm.iter().enumerate() {
            out_pos[old_j] = j;
        }
        g.vertices[v] = Vertex::new(
            in_perm.iter().map(|&j| old.inputs[j]).collect(),
            out_perm.iter().map(|&j| old.outputs[j]).collect(),
        );
        for e in &mut g.edges {
            match &mut e.kind {
                EdgeKind::Internal { src, tgt } => {
                    if src.vertex == v {
                        src.port = out_pos[src.port];
                    }
                    if tgt.vertex == v {
                        tgt.port = in_pos[tgt.port];
                    }
                }
                EdgeKind::InputLeg { tgt } if tgt.vertex == v => tgt.port = in_pos[tgt.port],
                EdgeKind::OutputLeg { src } if src.vertex == v => src.port = out_pos[src.port],
                _ => {}
            }
        }
        g
    }

    /// Renumbers vertices (`perm[old] = new`) and edges (`edge_perm[old] = new`).
    pub fn renumbered(&self, perm: &[usize], edge_perm: &[usize]) -> Graph {
        let mut vertices = vec![Vertex::default(); self.vertices.len()];
        for (old, v) in self.vertices.iter().enumerate() {
            vertices[perm[old]] = v.clone();
        }
        let mut edges = vec![
            Edge {
                color: Color(0),
                kind: EdgeKind::ExceptionalLoop
            };
            self.edges.len()
        ];
        let mv = |p: Port| Port::new(perm[p.vertex], p.port);
        for (old, e) in self.edges.iter().enumerate() {
            let kind = match e.kind {
                EdgeKind::Internal { src, tgt } => EdgeKind::Internal {
                    src: mv(src),
                    tgt: mv(tgt),
                },
                EdgeKind::InputLeg { tgt } => EdgeKind::InputLeg { tgt: mv(tgt) },
                EdgeKind::OutputLeg { src } => EdgeKind::OutputLeg { src: mv(src) },
                ref k => k.clone(),
            };
            edges[edge_perm[old]] = Edge {
                color: e.color,
                kind,
            };
        }
        Graph::new_unchecked(
            vertices,
            edges,
            self.in_listing.iter().map(|&e| edge_perm[e]).collect(),
            self.out_listing.iter().map(|&e| edge_perm[e]).collect(),
        )
    }

    /// Number of undirected cycles of the underlying multigraph
    /// (its cycle rank, loops included). `↻` counts as one.
    pub fn cycle_rank(&self) -> usize {
        if self.has_exceptional_loop() {
            return 1;
        }
        if self.vertices.is_empty() {
            return 0;
        }
        let internal = self.edges.iter().filter(|e| e.is_internal()).count();
        // connected: rank = E - V + 1
        (internal + 1).saturating_sub(self.vertices.len())
    }

    /// Whether some directed cycle (a loop included) exists.
    pub fn has_directed_cycle(&self) -> bool {
        if self.has_exceptional_loop() {
            return true;
        }
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            if let EdgeKind::Internal { src, tgt } = e.kind {
                succ[src.vertex].push(tgt.vertex);
                indeg[tgt.vertex] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        removed < n
    }

    /// Graphviz rendering for inspection.
    pub fn to_dot(&self, colors: Option<&crate::profiles::ColorSet>) -> String {
        let name = |c: Color| match colors {
            Some(cs) if cs.contains(c) => cs.name(c).to_string(),
            _ => c.0.to_string(),
        };
        let mut s = String::from("digraph G {\n");
        for (i, _) in self.vertices.iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"v{i}\"];\n"));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let c = name(e.color);
            match e.kind {
                EdgeKind::Internal { src, tgt } => s.push_str(&format!(
                    "  v{} -> v{} [label=\"e{i}:{c}\"];\n",
                    src.vertex, tgt.vertex
                )),
                EdgeKind::InputLeg { tgt } => {
                    let pos = self.in_listing.iter().position(|&x| x == i).unwrap_or(0);
                    s.push_str(&format!(
                        "  in{pos} [shape=point];\n  in{pos} -> v{} [label=\"e{i}:{c}\"];\n",
                        tgt.vertex
                    ))
                }
                EdgeKind::OutputLeg { src } => {
                    let pos = self.out_listing.iter().position(|&x| x == i).unwrap_or(0);
                    s.push_str(&format!(
                        "  out{pos} [shape=point];\n  v{} -> out{pos} [label=\"e{i}:{c}\"];\n",
                        src.vertex
                    ))
                }
                EdgeKind::ExceptionalEdge => s.push_str(&format!(
                    "  i [shape=point]; o [shape=point];\n  i -> o [label=\"{c}\"];\n"
                )),
                EdgeKind::ExceptionalLoop => {
                    s.push_str(&format!("  l [shape=point];\n  l -> l [label=\"{c}\"];\n"))
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Plain union-find with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn push(&mut self) -> usize {
        let i = self.parent.len();
        self.parent.push(i);
        i
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes; the smaller root survives. Returns whether a
    /// merge happened.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Dense class labels `0..k`, numbered by first occurrence.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut k = 0;
        for i in 0..n {
            let r = self.find(i);
            if label[r] == usize::MAX {
                label[r] = k;
                k += 1;
            }
            out[i] = label[r];
        }
        (out, k)
    }
}
