//! Strict isomorphism: listings of the graph and of every vertex are kept.

use std::collections::VecDeque;

use super::{EdgeKind, Graph, Isomorphism};

/// A listing-preserving isomorphism `g → h` (mapping `marks.0` onto
/// `marks.1` when given), if any.
pub fn strict_iso(g: &Graph, h: &Graph, marks: Option<(&[usize], &[usize])>) -> Option<Isomorphism> {
    if g.num_vertices() != h.num_vertices()
        || g.num_edges() != h.num_edges()
        || g.profile() != h.profile()
    {
        return None;
    }
    if g.is_exceptional() {
        return (g.edges() == h.edges()).then(|| Isomorphism::identity(g));
    }
    let (mg, mh) = marks.unwrap_or((&[], &[]));
    let mut marked_g = vec![false; g.num_vertices()];
    let mut marked_h = vec![false; h.num_vertices()];
    mg.iter().for_each(|&v| marked_g[v] = true);
    mh.iter().for_each(|&v| marked_h[v] = true);
    let ig = g.incidence();
    let ih = h.incidence();
    'candidate: for start in 0..h.num_vertices() {
        let mut vmap = vec![usize::MAX; g.num_vertices()];
        let mut vused = vec![false; h.num_vertices()];
        let mut emap = vec![usize::MAX; g.num_edges()];
        let mut eused = vec![false; h.num_edges()];
        let mut queue = VecDeque::new();
        let mut assign = |v: usize, w: usize, vmap: &mut Vec<usize>, queue: &mut VecDeque<usize>| {
            if vmap[v] == usize::MAX {
                if vused[w] || g.vertex(v) != h.vertex(w) || marked_g[v] != marked_h[w] {
                    return false;
                }
                vmap[v] = w;
                vused[w] = true;
                queue.push_back(v);
                true
            } else {
                vmap[v] == w
            }
        };
        if !assign(0, start, &mut vmap, &mut queue) {
            continue;
        }
        while let Some(v) = queue.pop_front() {
            let w = vmap[v];
            let pairs = ig.in_edges[v]
                .iter()
                .zip(&ih.in_edges[w])
                .chain(ig.out_edges[v].iter().zip(&ih.out_edges[w]));
            for (&e, &f) in pairs {
                if emap[e] != usize::MAX {
                    if emap[e] != f {
                        continue 'candidate;
                    }
                    continue;
                }
                if eused[f] {
                    continue 'candidate;
                }
                let (ge, he) = (g.edge(e), h.edge(f));
                if ge.color != he.color {
                    continue 'candidate;
                }
                match (&ge.kind, &he.kind) {
                    (EdgeKind::Internal { src, tgt }, EdgeKind::Internal { src: s2, tgt: t2 }) => {
                        if src.port != s2.port || tgt.port != t2.port {
                            continue 'candidate;
                        }
                        if !assign(src.vertex, s2.vertex, &mut vmap, &mut queue)
                            || !assign(tgt.vertex, t2.vertex, &mut vmap, &mut queue)
                        {
                            continue 'candidate;
                        }
                    }
                    (EdgeKind::InputLeg { .. }, EdgeKind::InputLeg { .. }) => {
                        let pg = g.in_listing().iter().position(|&x| x == e);
                        let ph = h.in_listing().iter().position(|&x| x == f);
                        if pg != ph {
                            continue 'candidate;
                        }
                    }
                    (EdgeKind::OutputLeg { .. }, EdgeKind::OutputLeg { .. }) => {
                        let pg = g.out_listing().iter().position(|&x| x == e);
                        let ph = h.out_listing().iter().position(|&x| x == f);
                        if pg != ph {
                            continue 'candidate;
                        }
                    }
                    _ => continue 'candidate,
                }
                emap[e] = f;
                eused[f] = true;
            }
        }
        if vmap.contains(&usize::MAX) || emap.contains(&usize::MAX) {
            continue;
        }
        return Some(Isomorphism {
            vertex_map: vmap,
            edge_map: emap,
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{Color, ProfilePair};

    #[test]
    fn strict_iso_respects_listings() {
        let a = Color(0);
        let b = Color(1);
        let g = Graph::corolla(&ProfilePair::new(vec![a, b], vec![]));
        let h = Graph::corolla(&ProfilePair::new(vec![b, a], vec![]));
        assert!(strict_iso(&g, &g, None).unwrap().is_identity());
        assert!(strict_iso(&g, &h, None).is_none());
        let relisted = g.relisted(&[1, 0], &[]);
        assert!(strict_iso(&g, &relisted, None).is_none());
    }

    #[test]
    fn strict_iso_finds_renumbering() {
        let g = crate::graph::tests::walnut();
        let h = g.renumbered(&[1, 0], &[1, 0]);
        let iso = strict_iso(&g, &h, None).unwrap();
        assert_eq!(iso.vertex_map, vec![1, 0]);
    }
}
