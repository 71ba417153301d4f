//! Seeded random instances drawn from a bounded enumeration of members.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::Result;
use crate::graph::{strict_iso, EdgeKind, Graph};
use crate::marked::MarkedGraph;
use crate::ops::{substitute_all, substitute_tracked};
use crate::profiles::{matching_perms, ProfilePair};
use crate::schemes::{enumerate_graphs, Bound, PastingScheme};

pub struct Sampler {
    pub scheme: PastingScheme,
    pub members: Vec<Graph>,
    /// Members with at least one vertex.
    nonexceptional: Vec<usize>,
    by_profile: HashMap<ProfilePair, Vec<usize>>,
    /// Members with a vertex that can be distinguished on its own.
    markable: HashMap<ProfilePair, Vec<usize>>,
    rng: ChaCha8Rng,
}

impl Sampler {
    /// Members of `scheme` within `bound`, sampled with a fixed seed.
    pub fn new(scheme: &PastingScheme, bound: Bound, seed: u64, budget: &Budget) -> Result<Self> {
        let members: Vec<Graph> = enumerate_graphs(&scheme.universe(bound), budget)?
            .into_iter()
            .map(|(_, g)| g)
            .filter(|g| scheme.member(g))
            .collect();
        let mut by_profile: HashMap<ProfilePair, Vec<usize>> = HashMap::new();
        let mut markable: HashMap<ProfilePair, Vec<usize>> = HashMap::new();
        for (i, g) in members.iter().enumerate() {
            by_profile.entry(g.profile().orbit_key()).or_default().push(i);
            if eligible(g).contains(&true) {
                markable.entry(g.profile().orbit_key()).or_default().push(i);
            }
        }
        Ok(Sampler {
            scheme: scheme.clone(),
            nonexceptional: (0..members.len()).filter(|&i| !members[i].is_exceptional()).collect(),
            members,
            by_profile,
            markable,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A uniformly chosen member with at least one vertex.
    pub fn member(&mut self) -> Option<Graph> {
        let &i = self.nonexceptional.choose(&mut self.rng)?;
        Some(self.members[i].clone())
    }

    /// A member (possibly exceptional) whose profile is exactly `p`, legs listed at random among
    /// the listings that achieve it.
    pub fn member_with_profile(&mut self, p: &ProfilePair) -> Option<Graph> {
        let &i = self.by_profile.get(&p.orbit_key())?.choose(&mut self.rng)?;
        self.relisted_to(i, p)
    }

    fn relisted_to(&mut self, i: usize, p: &ProfilePair) -> Option<Graph> {
        let g = &self.members[i];
        let gp = g.profile();
        let ins = matching_perms(&gp.inputs, &p.inputs);
        let outs = matching_perms(&gp.outputs, &p.outputs);
        let si = ins.choose(&mut self.rng)?;
        let so = outs.choose(&mut self.rng)?;
        Some(g.relisted(si.images(), so.images()))
    }

    /// One random member per vertex of `g`, matching its profile.
    pub fn assignment(&mut self, g: &Graph) -> Option<Vec<Graph>> {
        g.vertices()
            .iter()
            .map(|v| self.member_with_profile(&v.profile()))
            .collect()
    }

    /// A random member with a random well-marking: distinguished vertices
    /// have no legs or loops and are pairwise nonadjacent.
    pub fn well_marked(&mut self) -> Option<MarkedGraph> {
        (0..64).find_map(|_| {
            let g = self.member()?;
            self.well_marking(g)
        })
    }

    /// A random well-marked member with profile exactly `p`.
    pub fn well_marked_with_profile(&mut self, p: &ProfilePair) -> Option<MarkedGraph> {
        let &i = self.markable.get(&p.orbit_key())?.choose(&mut self.rng)?;
        let g = self.relisted_to(i, p)?;
        self.well_marking(g)
    }

    /// A random nonempty well-marking of `g`, if any vertex qualifies.
    pub fn well_marking(&mut self, g: Graph) -> Option<MarkedGraph> {
        let mut order: Vec<usize> = eligible(&g).iter().enumerate().filter(|(_, &e)| e).map(|(v, _)| v).collect();
        if order.is_empty() {
            return None;
        }
        order.shuffle(&mut self.rng);
        let mut ds: Vec<usize> = Vec::new();
        for v in order {
            let adjacent = g.edges().iter().any(|e| match e.kind {
                EdgeKind::Internal { src, tgt } => {
                    (src.vertex == v && ds.contains(&tgt.vertex)) || (tgt.vertex == v && ds.contains(&src.vertex))
                }
                _ => false,
            });
            if !adjacent && (ds.is_empty() || self.rng.gen_bool(0.5)) {
                ds.push(v);
            }
        }
        MarkedGraph::new(g, ds).ok()
    }

    /// Both sides of `G(H_v)(K) ≅ G(H_v(K_v))` for random `G`, `H_v`, `K`;
    /// `None` when no instance could be drawn.
    pub fn associativity_pair(&mut self) -> Option<Result<(Graph, Graph)>> {
        let g = self.member()?;
        let h = self.assignment(&g)?;
        let k: Vec<Vec<Graph>> = h.iter().map(|x| self.assignment(x)).collect::<Option<_>>()?;
        Some((|| {
            let outer = substitute_tracked(&g, &h.iter().cloned().enumerate().collect())?;
            let flat: Vec<Graph> = outer.vertex_origin.iter().map(|&(v, j)| k[v][j].clone()).collect();
            let left = substitute_all(&outer.graph, &flat)?;
            let inner = h.iter().zip(&k).map(|(x, kx)| substitute_all(x, kx)).collect::<Result<Vec<_>>>()?;
            Ok((left, substitute_all(&g, &inner)?))
        })())
    }

    pub fn associativity_instance(&mut self) -> Option<bool> {
        self.associativity_pair()
            .map(|r| r.is_ok_and(|(l, r)| strict_iso(&l, &r, None).is_some()))
    }

    /// A random member `G` with `G(corollas)` and `corolla(G)`, both of
    /// which should be `G` strictly.
    pub fn unit_triple(&mut self) -> Option<Result<(Graph, Graph, Graph)>> {
        let g = self.member()?;
        let corollas: Vec<Graph> = g.vertices().iter().map(|v| Graph::corolla(&v.profile())).collect();
        Some((|| {
            let inside = substitute_all(&g, &corollas)?;
            let outside = substitute_all(&Graph::corolla(&g.profile()), std::slice::from_ref(&g))?;
            Ok((g, inside, outside))
        })())
    }

    pub fn unit_instance(&mut self) -> Option<bool> {
        self.unit_triple().map(|r| {
            r.is_ok_and(|(g, a, b)| strict_iso(&a, &g, None).is_some() && strict_iso(&b, &g, None).is_some())
        })
    }

    pub fn check_laws(&mut self, instances: usize) -> LawReport {
        let mut report = LawReport::default();
        for _ in 0..instances {
            match self.associativity_instance() {
                Some(ok) => {
                    report.associativity += 1;
                    report.associativity_failures += usize::from(!ok);
                }
                None => report.skipped += 1,
            }
            match self.unit_instance() {
                Some(ok) => {
                    report.unit += 1;
                    report.unit_failures += usize::from(!ok);
                }
                None => report.skipped += 1,
            }
        }
        report
    }
}

/// Vertices without legs or loops.
fn eligible(g: &Graph) -> Vec<bool> {
    let mut ok = vec![true; g.num_vertices()];
    for e in g.edges() {
        match e.kind {
            EdgeKind::Internal { src, tgt } if src.vertex == tgt.vertex => ok[src.vertex] = false,
            EdgeKind::InputLeg { tgt } => ok[tgt.vertex] = false,
            EdgeKind::OutputLeg { src } => ok[src.vertex] = false,
            _ => {}
        }
    }
    ok
}

/// Counts of sampled substitution-law instances.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub associativity: usize,
    pub associativity_failures: usize,
    pub unit: usize,
    pub unit_failures: usize,
    /// Draws for which no instance could be formed.
    pub skipped: usize,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.associativity_failures == 0 && self.unit_failures == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marked::{classify_marking, MarkingClass};
    use crate::schemes::Builtin;

    #[test]
    fn laws_hold_on_samples() {
        let s = PastingScheme::builtin(Builtin::ConnectedWheeled);
        let mut sampler = Sampler::new(&s, Bound::new(3, 6, 1), 7, &Budget::default()).unwrap();
        let r = sampler.check_laws(40);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.associativity + r.unit, 80);
    }

    #[test]
    fn markings_are_well_marked_and_seeded() {
        let s = PastingScheme::builtin(Builtin::SimplyConnected);
        let draw = |seed| {
            let mut sampler = Sampler::new(&s, Bound::new(3, 6, 1), seed, &Budget::default()).unwrap();
            (0..20).map(|_| sampler.well_marked().unwrap()).collect::<Vec<_>>()
        };
        let a = draw(3);
        assert!(a.iter().all(|m| classify_marking(m) != MarkingClass::Plain));
        assert_eq!(a, draw(3));
    }
}
