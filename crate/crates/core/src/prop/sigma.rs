//! The automorphism group `Σ_[r]` of a sorted profile pair, acting by
//! moving ports or listing positions.

use std::collections::HashMap;
use std::sync::Arc;

use crate::equivariant::FiniteGroup;
use crate::graph::Graph;
use crate::profiles::{Perm, ProfilePair};

/// Color-preserving pairs `(σ_in, σ_out)`; an element moves position `j`
/// to `σ(j)`, and the product is composition.
#[derive(Debug, Clone)]
pub struct StabGroup {
    pub profile: ProfilePair,
    pub group: Arc<FiniteGroup>,
    pub elems: Vec<(Perm, Perm)>,
    index: HashMap<(Perm, Perm), usize>,
}

impl StabGroup {
    pub fn new(profile: &ProfilePair) -> Self {
        let (group, elems) = FiniteGroup::from_elements(profile.stabilizer(), |a, b| {
            (a.0.compose(&b.0), a.1.compose(&b.1))
        });
        let index = elems.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        StabGroup {
            profile: profile.clone(),
            group: Arc::new(group),
            elems,
            index,
        }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn index_of(&self, ins: &[usize], outs: &[usize]) -> Option<usize> {
        let key = (Perm::new(ins.to_vec()).ok()?, Perm::new(outs.to_vec()).ok()?);
        self.index.get(&key).copied()
    }

    /// `g` applied to the graph listing: the leg at position `j` moves to
    /// position `σ(j)`.
    pub fn move_listing(&self, g: &Graph, e: usize) -> Graph {
        let (si, so) = &self.elems[e];
        g.relisted(si.inverse().images(), so.inverse().images())
    }

    /// `g` applied to the ports of vertex `v`.
    pub fn move_ports(&self, g: &Graph, v: usize, e: usize) -> Graph {
        let (si, so) = &self.elems[e];
        g.relist_vertex(v, si.inverse().images(), so.inverse().images())
    }
}

/// Stable sort of a profile's colors: `perm[j]` is the old position of the
/// `j`-th port after sorting, as expected by [`Graph::relist_vertex`].
pub fn sorting_perm(colors: &[crate::profiles::Color]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..colors.len()).collect();
    p.sort_by_key(|&j| colors[j]);
    p
}

/// Relists every vertex and the graph legs so that all profiles are sorted.
pub fn sort_ports(g: &Graph) -> Graph {
    let mut g = g.clone();
    for v in 0..g.num_vertices() {
        let vx = g.vertex(v).clone();
        let (pi, po) = (sorting_perm(&vx.inputs), sorting_perm(&vx.outputs));
        if pi.iter().enumerate().any(|(i, &j)| i != j) || po.iter().enumerate().any(|(i, &j)| i != j) {
            g = g.relist_vertex(v, &pi, &po);
        }
    }
    let p = g.profile();
    g.relisted(&sorting_perm(&p.inputs.0), &sorting_perm(&p.outputs.0))
}
