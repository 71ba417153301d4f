//! Isomorphism by trying every vertex bijection.
//!
//! A weak isomorphism is a vertex bijection and an edge bijection that
//! respect colors and incidence; port positions are free. So two graphs are
//! weakly isomorphic exactly when some vertex bijection carries the multiset
//! of edge descriptions `(kind, color, source vertex, target vertex)` of one
//! onto the other.

use itertools::Itertools;
use props_engine::graph::{EdgeKind, Graph};

/// `(kind, color, source, target)`; legs use `usize::MAX` for the free end.
type EdgeDesc = (u8, u32, usize, usize);

/// Lexicographically least description over all admissible bijections.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BruteKey {
    vertices: Vec<(bool, Vec<u32>, Vec<u32>)>,
    edges: Vec<EdgeDesc>,
}

fn describe(g: &Graph, image: &[usize]) -> Vec<EdgeDesc> {
    const FREE: usize = usize::MAX;
    let mut out: Vec<EdgeDesc> = g
        .edges()
        .iter()
        .map(|e| {
            let c = e.color.0;
            match e.kind {
                EdgeKind::Internal { src, tgt } => (0, c, image[src.vertex], image[tgt.vertex]),
                EdgeKind::InputLeg { tgt } => (1, c, FREE, image[tgt.vertex]),
                EdgeKind::OutputLeg { src } => (2, c, image[src.vertex], FREE),
                EdgeKind::ExceptionalEdge => (3, c, FREE, FREE),
                EdgeKind::ExceptionalLoop => (4, c, FREE, FREE),
            }
        })
        .collect();
    out.sort_unstable();
    out
}

fn sorted(v: &[props_engine::Color]) -> Vec<u32> {
    v.iter().map(|c| c.0).sorted().collect()
}

/// Vertex classes: marked or not, then sorted input and output colors.
fn vertex_label(g: &Graph, marks: &[usize], v: usize) -> (bool, Vec<u32>, Vec<u32>) {
    let x = g.vertex(v);
    (marks.contains(&v), sorted(&x.inputs), sorted(&x.outputs))
}

/// Every bijection sending each vertex to a position reserved for its
/// class, positions ordered by class.
fn bijections(g: &Graph, marks: &[usize]) -> (Vec<(bool, Vec<u32>, Vec<u32>)>, Vec<Vec<usize>>) {
    let n = g.num_vertices();
    let labels: Vec<_> = (0..n).map(|v| vertex_label(g, marks, v)).collect();
    let classes: Vec<_> = labels.iter().cloned().sorted().dedup().collect();
    let members: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| (0..n).filter(|&v| &labels[v] == c).collect())
        .collect();
    let mut offsets = Vec::new();
    let mut at = 0;
    for m in &members {
        offsets.push(at);
        at += m.len();
    }
    let per_class: Vec<Vec<Vec<usize>>> = members
        .iter()
        .map(|m| m.iter().copied().permutations(m.len()).collect())
        .collect();
    let mut out = Vec::new();
    for choice in per_class.iter().multi_cartesian_product() {
        let mut image = vec![0; n];
        for (ci, order) in choice.iter().enumerate() {
            for (i, &v) in order.iter().enumerate() {
                image[v] = offsets[ci] + i;
            }
        }
        out.push(image);
    }
    if n == 0 {
        out.push(Vec::new());
    }
    let sorted_labels = classes
        .iter()
        .zip(&members)
        .flat_map(|(c, m)| std::iter::repeat(c.clone()).take(m.len()))
        .collect();
    (sorted_labels, out)
}

/// A complete invariant of the marked weak-isomorphism class.
pub fn brute_key(g: &Graph, marks: &[usize]) -> BruteKey {
    let (vertices, maps) = bijections(g, marks);
    let edges = maps.iter().map(|m| describe(g, m)).min().expect("at least one bijection");
    BruteKey { vertices, edges }
}

pub fn brute_weak_iso(g: &Graph, marks_g: &[usize], h: &Graph, marks_h: &[usize]) -> bool {
    brute_key(g, marks_g) == brute_key(h, marks_h)
}

/// Order of the weak automorphism group: vertex bijections fixing the
/// description, each extended by every permutation of parallel edges.
pub fn brute_automorphism_count(g: &Graph, marks: &[usize]) -> usize {
    let n = g.num_vertices();
    let base = describe(g, &(0..n).collect::<Vec<_>>());
    let labels: Vec<_> = (0..n).map(|v| vertex_label(g, marks, v)).collect();
    let fixing = (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|v| labels[p[v]] == labels[v]))
        .filter(|p| describe(g, p) == base)
        .count()
        .max(1);
    let parallel: usize = base
        .iter()
        .dedup_with_count()
        .map(|(m, _)| (1..=m).product::<usize>())
        .product();
    fixing * parallel
}

/// Strict isomorphism: a vertex bijection preserving port lists exactly,
/// with edges and graph legs matching port for port.
pub fn brute_strict_iso(g: &Graph, h: &Graph) -> bool {
    let n = g.num_vertices();
    if n != h.num_vertices() || g.num_edges() != h.num_edges() || g.profile() != h.profile() {
        return false;
    }
    let leg_ends = |x: &Graph, image: &[usize]| -> (Vec<EdgeDescPorts>, Vec<EdgeDescPorts>, Vec<EdgeDescPorts>) {
        let d = |e: usize| port_desc(x, e, image);
        let internal = (0..x.num_edges())
            .filter(|&e| x.edge(e).is_internal())
            .map(d)
            .sorted()
            .collect();
        let ins = x.in_listing().iter().map(|&e| d(e)).collect();
        let outs = x.out_listing().iter().map(|&e| d(e)).collect();
        (internal, ins, outs)
    };
    let target = leg_ends(h, &(0..n).collect::<Vec<_>>());
    (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|v| g.vertex(v) == h.vertex(p[v])))
        .any(|p| leg_ends(g, &p) == target)
}

type EdgeDescPorts = (u8, u32, Option<(usize, usize)>, Option<(usize, usize)>);

fn port_desc(g: &Graph, e: usize, image: &[usize]) -> EdgeDescPorts {
    let x = g.edge(e);
    let p = |q: props_engine::Port| Some((image[q.vertex], q.port));
    match x.kind {
        EdgeKind::Internal { src, tgt } => (0, x.color.0, p(src), p(tgt)),
        EdgeKind::InputLeg { tgt } => (1, x.color.0, None, p(tgt)),
        EdgeKind::OutputLeg { src } => (2, x.color.0, p(src), None),
        EdgeKind::ExceptionalEdge => (3, x.color.0, None, None),
        EdgeKind::ExceptionalLoop => (4, x.color.0, None, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use props_engine::graph::{Edge, Port, Vertex};
    use props_engine::Color;

    const C: Color = Color(0);

    fn walnut() -> Graph {
        Graph::with_default_listings(
            vec![Vertex::new(vec![], vec![C, C]), Vertex::new(vec![C, C], vec![])],
            vec![
                Edge::internal(C, Port::new(0, 0), Port::new(1, 0)),
                Edge::internal(C, Port::new(0, 1), Port::new(1, 1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn walnut_has_two_automorphisms() {
        assert_eq!(brute_automorphism_count(&walnut(), &[]), 2);
        assert_eq!(brute_automorphism_count(&walnut(), &[0]), 2);
    }

    #[test]
    fn renumbering_is_strict() {
        let g = walnut();
        let h = g.renumbered(&[1, 0], &[1, 0]);
        assert!(brute_strict_iso(&g, &h));
        assert!(brute_weak_iso(&g, &[], &h, &[]));
        assert!(!brute_weak_iso(&g, &[0], &h, &[0]));
    }
}
