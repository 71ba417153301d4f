//! Vertex decorations `A(n(G))` of a marked graph as sets with an action of
//! its automorphism group.

use std::sync::Arc;

use super::collection::Collection;
use super::free::FreeProp;
use super::sigma::{sort_ports, StabGroup};
use crate::equivariant::{FiniteGroup, GSet};
use crate::error::{Error, Result};
use crate::graph::{automorphisms, Graph, Isomorphism};
use crate::marked::MarkedGraph;
use crate::profiles::ProfilePair;

/// Anything with one `Σ_[p]`-set per sorted profile.
pub trait EntrySource {
    fn entry_set(&self, p: &ProfilePair) -> Result<(Arc<StabGroup>, GSet)>;
}

impl EntrySource for Collection {
    fn entry_set(&self, p: &ProfilePair) -> Result<(Arc<StabGroup>, GSet)> {
        Ok(match self.get(p) {
            Some(e) => (e.stab.clone(), e.set.clone()),
            None => {
                let stab = Arc::new(StabGroup::new(&p.orbit_key()));
                let set = GSet::trivial(stab.group.clone(), 0);
                (stab, set)
            }
        })
    }
}

impl EntrySource for FreeProp {
    fn entry_set(&self, p: &ProfilePair) -> Result<(Arc<StabGroup>, GSet)> {
        let e = self.entry(p)?;
        Ok((e.stab.clone(), e.set.clone()))
    }
}

/// `Aut(G, ds)` of a marked graph with sorted ports, with the data needed
/// to let it act on decorations.
#[derive(Debug, Clone)]
pub struct AutGroup {
    pub graph: Graph,
    pub ds: Vec<usize>,
    pub normal: Vec<usize>,
    pub group: Arc<FiniteGroup>,
    /// Group elements in table order; the product `a · b` is `b` then `a`.
    pub auts: Vec<Isomorphism>,
    pub stab_r: Arc<StabGroup>,
    /// The induced permutation of the graph legs, in `Σ_[r]`.
    pub leg_hom: Vec<usize>,
    /// `port_moves[a][v]`: how `a` carries the ports of `v` to those of
    /// `a(v)`, as an element of the stabilizer of `v`'s profile.
    pub port_moves: Vec<Vec<usize>>,
    pub vertex_stabs: Vec<Arc<StabGroup>>,
}

impl AutGroup {
    pub fn new(m: &MarkedGraph, cap: usize) -> Result<Self> {
        let graph = sort_ports(&m.graph);
        let found = automorphisms(&graph, &m.ds, cap)?;
        let (group, auts) = FiniteGroup::from_elements(found, |a, b| b.then(a));
        let r = graph.profile();
        let stab_r = Arc::new(StabGroup::new(&r));
        let vertex_stabs: Vec<Arc<StabGroup>> =
            graph.vertices().iter().map(|v| Arc::new(StabGroup::new(&v.profile()))).collect();
        let leg_hom = auts
            .iter()
            .map(|a| {
                stab_r
                    .index_of(&a.in_leg_perm(&graph, &graph), &a.out_leg_perm(&graph, &graph))
                    .ok_or_else(|| Error::InvalidGraph("an automorphism mixes leg colors".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let port_moves = auts
            .iter()
            .map(|a| {
                (0..graph.num_vertices())
                    .map(|v| {
                        vertex_stabs[v]
                            .index_of(&a.in_port_map(&graph, &graph, v), &a.out_port_map(&graph, &graph, v))
                            .ok_or_else(|| Error::InvalidGraph("an automorphism mixes port colors".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AutGroup {
            normal: m.normal(),
            ds: m.ds.clone(),
            graph,
            group: Arc::new(group),
            auts,
            stab_r,
            leg_hom,
            port_moves,
            vertex_stabs,
        })
    }

    pub fn order(&self) -> usize {
        self.auts.len()
    }

    /// Where `a` sends each vertex of `vs`, as positions in `vs`.
    fn position_perm(&self, a: usize, vs: &[usize]) -> Vec<usize> {
        vs.iter()
            .map(|&v| {
                let w = self.auts[a].vertex_map[v];
                vs.iter().position(|&u| u == w).expect("automorphisms preserve the marking")
            })
            .collect()
    }
}

/// The product of one set per vertex of `vs`, tuples numbered with the
/// first coordinate most significant.
#[derive(Debug, Clone)]
pub struct Decoration {
    pub aut: Arc<AutGroup>,
    pub vertices: Vec<usize>,
    pub radix: Vec<usize>,
    pub set: GSet,
}

impl Decoration {
    pub fn tuple(&self, mut i: usize) -> Vec<usize> {
        let mut t = vec![0; self.radix.len()];
        for p in (0..self.radix.len()).rev() {
            t[p] = i % self.radix[p];
            i /= self.radix[p];
        }
        t
    }

    pub fn index(&self, t: &[usize]) -> usize {
        t.iter().zip(&self.radix).fold(0, |acc, (&x, &n)| acc * n + x)
    }
}

/// `A(n(G)) = ∏_{u normal} A(u)`; an automorphism moves the factor at `u`
/// to `a(u)` and acts on it by its port map.
pub fn decorate(a: &dyn EntrySource, aut: Arc<AutGroup>) -> Result<Decoration> {
    let vertices = aut.normal.clone();
    let factors = vertices
        .iter()
        .map(|&u| {
            let (stab, set) = a.entry_set(&aut.graph.vertex(u).profile())?;
            if stab.profile != aut.vertex_stabs[u].profile {
                return Err(Error::Equivariance("entry stabilizer does not match the vertex".into()));
            }
            Ok(set)
        })
        .collect::<Result<Vec<_>>>()?;
    let radix: Vec<usize> = factors.iter().map(GSet::size).collect();
    let size: usize = radix.iter().product();
    let mut d = Decoration {
        aut: aut.clone(),
        vertices,
        radix,
        set: GSet::trivial(aut.group.clone(), 0),
    };
    let action = (0..aut.order())
        .map(|g| {
            let pos = aut.position_perm(g, &d.vertices);
            (0..size)
                .map(|i| {
                    let t = d.tuple(i);
                    let mut out = vec![0; t.len()];
                    for (p, &x) in t.iter().enumerate() {
                        out[pos[p]] = factors[p].act(aut.port_moves[g][d.vertices[p]], x);
                    }
                    d.index(&out)
                })
                .collect()
        })
        .collect();
    d.set = GSet::new(aut.group.clone(), action)?;
    Ok(d)
}

/// The same construction over the distinguished vertices, each carrying an
/// element of a `Σ_[s]`-set given by its tagged representatives: tuples
/// are looked up with `lookup` after acting on every tag.
pub fn decorate_distinguished<T, A, L>(
    aut: &AutGroup,
    members: &[Vec<T>],
    act: A,
    lookup: L,
) -> Result<GSet>
where
    T: Clone,
    A: Fn(usize, &T) -> T,
    L: Fn(&[T]) -> Option<usize>,
{
    let action = (0..aut.order())
        .map(|g| {
            let pos = aut.position_perm(g, &aut.ds);
            members
                .iter()
                .map(|t| {
                    let mut out = t.clone();
                    for (p, x) in t.iter().enumerate() {
                        out[pos[p]] = act(aut.port_moves[g][aut.ds[p]], x);
                    }
                    lookup(&out).ok_or_else(|| Error::Equivariance("a moved tuple is not an element".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GSet::new(aut.group.clone(), action)
}

#[cfg(test)]
mod tests {
    use super::super::collection::EntrySet;
    use super::*;
    use crate::graph::{Edge, Port, Vertex};
    use crate::profiles::Color;

    const C: Color = Color(0);

    /// A distinguished vertex with two outputs, each feeding a normal
    /// vertex with one input and nothing else.
    fn two_normal_one_distinguished() -> MarkedGraph {
        let g = Graph::new(
            vec![Vertex::new(vec![], vec![C, C]), Vertex::new(vec![C], vec![]), Vertex::new(vec![C], vec![])],
            vec![
                Edge::internal(C, Port::new(0, 0), Port::new(1, 0)),
                Edge::internal(C, Port::new(0, 1), Port::new(2, 0)),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        MarkedGraph::new(g, vec![0]).unwrap()
    }

    #[test]
    fn equal_entries_on_swapped_vertices_are_not_free() {
        for n in 1..=4 {
            let mut a = Collection::new();
            let names = (0..n).map(|i| format!("a{i}")).collect();
            a.insert(EntrySet::trivial(&ProfilePair::new(vec![C], vec![]), names)).unwrap();
            let aut = Arc::new(AutGroup::new(&two_normal_one_distinguished(), 100).unwrap());
            assert_eq!(aut.order(), 2);
            let d = decorate(&a, aut).unwrap();
            assert_eq!(d.set.size(), n * n);
            let (g, x) = d.set.fixed_point_witness().unwrap();
            assert_ne!(g, d.set.group.identity());
            let t = d.tuple(x);
            assert_eq!(t[0], t[1]);
        }
    }

    #[test]
    fn walnut_decoration_is_the_other_vertex() {
        let g = Graph::new(
            vec![Vertex::new(vec![], vec![C, C]), Vertex::new(vec![C, C], vec![])],
            vec![
                Edge::internal(C, Port::new(0, 0), Port::new(1, 0)),
                Edge::internal(C, Port::new(0, 1), Port::new(1, 1)),
            ],
            vec![],
            vec![],
        )
        .unwrap();
        let m = MarkedGraph::new(g, vec![0]).unwrap();
        let p = ProfilePair::new(vec![C, C], vec![]);
        let aut = Arc::new(AutGroup::new(&m, 100).unwrap());
        assert_eq!(aut.order(), 2);
        let mut free = Collection::new();
        free.insert(EntrySet::free(&p, &["v".into()])).unwrap();
        let d = decorate(&free, aut.clone()).unwrap();
        assert_eq!(d.set.size(), 2);
        assert!(d.set.is_free());
        let mut trivial = Collection::new();
        trivial.insert(EntrySet::trivial(&p, vec!["v".into()])).unwrap();
        assert!(!decorate(&trivial, aut).unwrap().set.is_free());
    }
}
