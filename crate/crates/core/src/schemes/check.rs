//! Exhaustive, bounded checks of the pasting-scheme axioms and of
//! shrinkability.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::enumerate::{enumerate_graphs, profile_orbits, Bound};
use super::PastingScheme;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{EdgeKind, Graph, GraphJson};
use crate::ops::{extend, shrink, substitute, Side};
use crate::profiles::{matching_perms, Color, ColorSet, ProfilePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Partial,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub scheme: String,
    pub axiom: String,
    pub status: Status,
    /// The first offending graph in (vertices, flags, key) order.
    pub witness: Option<Graph>,
    /// A second graph explaining the failure, e.g. the result of shrinking.
    pub result: Option<Graph>,
    pub failures: usize,
    pub checked: usize,
    pub detail: String,
}

impl AxiomReport {
    fn new(scheme: &PastingScheme, axiom: &str) -> Self {
        AxiomReport {
            scheme: scheme.name().to_string(),
            axiom: axiom.to_string(),
            status: Status::Pass,
            witness: None,
            result: None,
            failures: 0,
            checked: 0,
            detail: String::new(),
        }
    }

    fn partial(scheme: &PastingScheme, axiom: &str, err: &Error) -> Self {
        AxiomReport {
            status: Status::Partial,
            detail: err.to_string(),
            ..AxiomReport::new(scheme, axiom)
        }
    }

    fn fail(&mut self, witness: Graph, result: Option<Graph>, detail: String) {
        self.status = Status::Fail;
        self.witness = Some(witness);
        self.result = result;
        self.detail = detail;
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self, colors: &ColorSet) -> Value {
        let g = |x: &Option<Graph>| {
            x.as_ref()
                .map(|g| serde_json::to_value(GraphJson::from_graph(g, colors)).expect("serializable"))
        };
        json!({
            "scheme": self.scheme,
            "axiom": self.axiom,
            "status": self.status,
            "witness": g(&self.witness),
            "result": g(&self.result),
            "failures": self.failures,
            "checked": self.checked,
            "detail": self.detail,
        })
    }
}

fn members(scheme: &PastingScheme, bound: Bound, budget: &Budget) -> Result<Vec<Graph>> {
    Ok(enumerate_graphs(&scheme.universe(bound), budget)?
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| scheme.member(g))
        .collect())
}

/// Checks, over every member within `bound`: member profiles lie in `S`,
/// corollas, extensions and unit edges are members, and substituting a
/// member into a vertex of a member stays a member whenever the result is
/// within `bound`.
pub fn check_axioms(scheme: &PastingScheme, bound: Bound, budget: &Budget) -> Vec<AxiomReport> {
    const AXIOMS: [&str; 5] = ["profiles", "corollas", "extensions", "units", "substitution"];
    let members = match members(scheme, bound, budget) {
        Ok(m) => m,
        Err(e) => return AXIOMS.iter().map(|a| AxiomReport::partial(scheme, a, &e)).collect(),
    };
    let s_profiles: Vec<ProfilePair> = profile_orbits(bound.colors, bound.max_flags)
        .into_iter()
        .filter(|p| scheme.profile_in_s(p))
        .collect();

    let mut profiles = AxiomReport::new(scheme, "profiles");
    profiles.checked = members.len();
    if let Some(g) = members.iter().find(|g| !scheme.profile_in_s(&g.profile())) {
        profiles.fail(g.clone(), None, format!("profile {} is not in S", g.profile()));
    }

    let mut corollas = AxiomReport::new(scheme, "corollas");
    for p in &s_profiles {
        corollas.checked += 1;
        let c = Graph::corolla(p);
        if !scheme.member(&c) {
            corollas.failures += 1;
            if corollas.witness.is_none() {
                corollas.fail(c, None, format!("corolla {p} is not a member"));
            }
        }
    }

    let mut extensions = AxiomReport::new(scheme, "extensions");
    for p in &s_profiles {
        let c = Graph::corolla(p);
        for (side, n) in [(Side::Input, p.inputs.len()), (Side::Output, p.outputs.len())] {
            let x = extend(&c, side);
            if 1 + n > bound.max_vertices || x.num_flags() > bound.max_flags {
                continue;
            }
            extensions.checked += 1;
            if !scheme.member(&x) {
                extensions.failures += 1;
                if extensions.witness.is_none() {
                    extensions.fail(x, None, format!("an extension of the corolla {p} is not a member"));
                }
            }
        }
    }

    let mut units = AxiomReport::new(scheme, "units");
    for c in (0..bound.colors as u32).map(Color) {
        units.checked += 1;
        let up = Graph::exceptional_edge(c);
        if !scheme.profile_in_s(&ProfilePair::unary(c)) || !scheme.member(&up) {
            units.failures += 1;
            if units.witness.is_none() {
                units.fail(up, None, format!("unit edge of color {} missing", c.0));
            }
        }
    }

    let mut subst = AxiomReport::new(scheme, "substitution");
    let mut by_orbit: BTreeMap<ProfilePair, Vec<&Graph>> = BTreeMap::new();
    for h in &members {
        by_orbit.entry(h.profile().orbit_key()).or_default().push(h);
    }
    let outcomes: Vec<(usize, Option<(Graph, Graph, String)>)> = members
        .par_iter()
        .map(|g| substitution_failures(scheme, bound, g, &by_orbit))
        .collect();
    for (checked, failure) in outcomes {
        subst.checked += checked;
        if let Some((result, inserted, detail)) = failure {
            subst.failures += 1;
            if subst.witness.is_none() {
                subst.fail(result, Some(inserted), detail);
            }
        }
    }

    vec![profiles, corollas, extensions, units, subst]
}

/// Tries every in-bound substitution into `g`; returns the number tried
/// and the first non-member result with the graph that was inserted.
fn substitution_failures(
    scheme: &PastingScheme,
    bound: Bound,
    g: &Graph,
    by_orbit: &BTreeMap<ProfilePair, Vec<&Graph>>,
) -> (usize, Option<(Graph, Graph, String)>) {
    let mut checked = 0;
    let inc = g.incidence();
    let class_of = |e: usize| -> (u8, Color, usize, usize) {
        let x = g.edge(e);
        match x.kind {
            EdgeKind::Internal { src, tgt } => (0, x.color, src.vertex, tgt.vertex),
            EdgeKind::InputLeg { tgt } => (1, x.color, usize::MAX, tgt.vertex),
            EdgeKind::OutputLeg { src } => (2, x.color, src.vertex, usize::MAX),
            _ => (3, x.color, 0, 0),
        }
    };
    for v in 0..g.num_vertices() {
        let pv = g.vertex(v).profile();
        let Some(candidates) = by_orbit.get(&pv.orbit_key()) else {
            continue;
        };
        let v_in: Vec<_> = inc.in_edges[v].iter().map(|&e| class_of(e)).collect();
        let v_out: Vec<_> = inc.out_edges[v].iter().map(|&e| class_of(e)).collect();
        for h in candidates {
            if g.num_vertices() - 1 + h.num_vertices() > bound.max_vertices
                || g.num_flags() - g.vertex(v).degree() + h.num_flags() > bound.max_flags
            {
                continue;
            }
            let leg_class = |e: usize| -> (usize, Color) {
                let x = h.edge(e);
                let at = x.target().or(x.source()).map_or(usize::MAX, |p| p.vertex);
                (at, x.color)
            };
            let hp = h.profile();
            let mut seen = HashSet::new();
            for si in matching_perms(&hp.inputs, &pv.inputs) {
                for so in matching_perms(&hp.outputs, &pv.outputs) {
                    let mut sig: Vec<_> = (0..v_in.len())
                        .map(|j| (0u8, v_in[j], leg_class(h.in_listing()[si.apply(j)])))
                        .chain((0..v_out.len()).map(|j| {
                            (1u8, v_out[j], leg_class(h.out_listing()[so.apply(j)]))
                        }))
                        .collect();
                    sig.sort_unstable();
                    if !seen.insert(sig) {
                        continue;
                    }
                    let relisted = h.relisted(si.images(), so.images());
                    let assignment = BTreeMap::from([(v, relisted.clone())]);
                    let result = substitute(g, &assignment).expect("profiles match");
                    checked += 1;
                    if !scheme.member(&result) {
                        let detail = format!(
                            "substituting a {}-vertex member into vertex {v} of a {}-vertex member leaves the scheme",
                            h.num_vertices(),
                            g.num_vertices()
                        );
                        return (checked, Some((result, relisted, detail)));
                    }
                }
            }
        }
    }
    (checked, None)
}

/// Shrinks every ordinary internal edge of every member within `bound`.
pub fn check_shrinkable(scheme: &PastingScheme, bound: Bound, budget: &Budget) -> AxiomReport {
    let members = match members(scheme, bound, budget) {
        Ok(m) => m,
        Err(e) => return AxiomReport::partial(scheme, "shrinkable", &e),
    };
    let outcomes: Vec<(usize, usize, Option<(Graph, usize)>)> = members
        .par_iter()
        .map(|g| {
            let mut first = None;
            let mut bad = 0;
            let edges = g.internal_edges();
            for &e in &edges {
                let s = shrink(g, e).expect("internal edge");
                if !scheme.member(&s) {
                    bad += 1;
                    first.get_or_insert((s, e));
                }
            }
            (edges.len(), bad, first)
        })
        .collect();
    let mut report = AxiomReport::new(scheme, "shrinkable");
    for (g, (n, bad, first)) in members.iter().zip(outcomes) {
        report.checked += n;
        report.failures += bad;
        if let (Some((s, e)), None) = (first, &report.witness) {
            report.fail(
                g.clone(),
                Some(s),
                format!("shrinking internal edge {e} leaves the scheme"),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::Builtin;
    use std::sync::Arc;

    #[test]
    fn unital_linear_axioms_hold() {
        let s = PastingScheme::builtin(Builtin::UnitalLinear);
        for r in check_axioms(&s, Bound::new(3, 6, 1), &Budget::default()) {
            assert!(r.passed(), "{} {}", r.axiom, r.detail);
        }
    }

    #[test]
    fn two_vertex_predicate_fails_substitution() {
        let s = PastingScheme::custom(
            "at-most-two-vertices",
            Arc::new(|_| true),
            Arc::new(|g: &Graph| g.num_vertices() <= 2),
            false,
        );
        let reports = check_axioms(&s, Bound::new(3, 6, 1), &Budget::default());
        let sub = reports.iter().find(|r| r.axiom == "substitution").unwrap();
        assert_eq!(sub.status, Status::Fail);
        assert_eq!(sub.witness.as_ref().unwrap().num_vertices(), 3);
    }

    #[test]
    fn wheel_free_shrink_witness_is_the_walnut() {
        let s = PastingScheme::builtin(Builtin::ConnectedWheelFree);
        let r = check_shrinkable(&s, Bound::new(2, 4, 1), &Budget::default());
        assert_eq!(r.status, Status::Fail);
        let w = r.witness.unwrap();
        assert_eq!((w.num_vertices(), w.num_edges()), (2, 2));
        assert!(w.edges().iter().all(|e| e.is_internal()));
    }
}
