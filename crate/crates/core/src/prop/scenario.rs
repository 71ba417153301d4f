//! Scenario files: a scheme, generators of a free prop, the attaching data
//! and the orbits at which to run the filtration against the oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::collection::{collection_from_json, EntryJson, EntrySet};
use super::compare::{compare, Comparison};
use super::decorated::Decorated;
use super::filtration::{attach_unit_maps, filtration, Filtration, PushoutProblem, UnitMaps};
use super::free::FreeProp;
use super::oracle::{pushout_oracle, OracleEntry};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphJson};
use crate::profiles::{ColorSet, ProfilePair, ProfilePairJson};
use crate::schemes::PastingScheme;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioJson {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub scheme: String,
    pub colors: Vec<String>,
    /// Vertex bound for the free prop `A`.
    pub max_vertices: usize,
    pub generators: Vec<EntryJson>,
    pub attach: AttachJson,
    pub orbits: Vec<OrbitJson>,
    /// Vertex bound for the oracle.
    pub oracle_max_vertices: usize,
}

/// `X → Y` at one profile, both free on the listed orbit names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttachJson {
    pub profile: ProfilePairJson,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub i: BTreeMap<String, String>,
    pub f: BTreeMap<String, DecoratedJson>,
}

/// An element of `A`: a single generator, or a graph with one generator
/// name per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecoratedJson {
    Generator { generator: String },
    Graph { graph: GraphJson, labels: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitJson {
    pub profile: ProfilePairJson,
    pub k_max: usize,
}

pub struct Scenario {
    pub json: ScenarioJson,
    pub colors: ColorSet,
    pub problem: PushoutProblem,
    pub orbits: Vec<(ProfilePair, usize)>,
}

/// Everything computed at one orbit.
pub struct OrbitRun {
    pub profile: ProfilePair,
    pub filtration: Filtration,
    pub oracle: OracleEntry,
    pub comparison: Comparison,
}

impl ScenarioJson {
    pub fn build(&self) -> Result<Scenario> {
        let colors = ColorSet::new(self.colors.iter().cloned())?;
        let scheme = PastingScheme::by_name(&self.scheme)?;
        let z = collection_from_json(&self.generators, &colors)?;
        let a = FreeProp::new(scheme, z, colors.len(), self.max_vertices);
        let s = self.attach.profile.to_pair(&colors)?;
        if s != s.orbit_key() {
            return Err(Error::Format("the attaching profile must list colors in sorted order".into()));
        }
        let x = EntrySet::free(&s, &self.attach.x);
        let y = EntrySet::free(&s, &self.attach.y);
        let n = x.stab.order();
        let orbit = |names: &[String], name: &str| {
            names
                .iter()
                .position(|m| m == name)
                .ok_or_else(|| Error::Format(format!("unknown attaching element `{name}`")))
        };
        let mut i = vec![0; x.len()];
        let mut f = vec![0; x.len()];
        let target = a.entry(&s)?;
        for (o, name) in self.attach.x.iter().enumerate() {
            let yo = orbit(&self.attach.y, self.attach.i.get(name).ok_or_else(|| {
                Error::Format(format!("i is not defined on `{name}`"))
            })?)?;
            let fx = self.attach.f.get(name).ok_or_else(|| Error::Format(format!("f is not defined on `{name}`")))?;
            let d = fx.build(&a, &s, &colors)?;
            let e = a.lookup(&d)?.ok_or_else(|| Error::Format(format!("f(`{name}`) is not an element of A")))?;
            for h in 0..n {
                i[o * n + h] = yo * n + h;
                f[o * n + h] = target.set.act(h, e);
            }
        }
        let problem = PushoutProblem::new(a, x, y, i, f)?;
        let orbits = self
            .orbits
            .iter()
            .map(|o| Ok((o.profile.to_pair(&colors)?.orbit_key(), o.k_max)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scenario {
            json: self.clone(),
            colors,
            problem,
            orbits,
        })
    }
}

impl DecoratedJson {
    fn build(&self, a: &FreeProp, s: &ProfilePair, colors: &ColorSet) -> Result<Decorated> {
        let label = |name: &str| {
            (0..a.alpha.len())
                .find(|&l| a.alpha.name(l) == name)
                .ok_or_else(|| Error::Format(format!("unknown generator `{name}`")))
        };
        match self {
            DecoratedJson::Generator { generator } => {
                let l = label(generator)?;
                if a.alpha.info(l).profile != *s {
                    return Err(Error::Format(format!("generator `{generator}` does not sit at the attaching profile")));
                }
                Ok(Decorated::corolla(s, l))
            }
            DecoratedJson::Graph { graph, labels } => {
                let (cs, g): (ColorSet, Graph) = graph.to_graph()?;
                if cs.names() != colors.names() {
                    return Err(Error::Format("graph colors differ from the scenario colors".into()));
                }
                if labels.len() != g.num_vertices() {
                    return Err(Error::Format("one label per vertex is required".into()));
                }
                let labels = labels.iter().map(|n| label(n)).collect::<Result<Vec<_>>>()?;
                for (v, &l) in labels.iter().enumerate() {
                    if g.vertex(v).profile() != a.alpha.info(l).profile {
                        return Err(Error::Format(format!("vertex {v} does not match its label's sorted profile")));
                    }
                }
                Ok(Decorated { graph: g, labels })
            }
        }
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let json: ScenarioJson = serde_json::from_str(text).map_err(|e| {
            Error::Format(format!("scenario at line {} column {}: {e}", e.line(), e.column()))
        })?;
        json.build()
    }

    pub fn run_orbit(&self, r: &ProfilePair, k_max: usize, budget: &Budget) -> Result<OrbitRun> {
        let filtration = filtration(&self.problem, r, k_max, budget)?;
        let oracle = pushout_oracle(&self.problem, r, self.json.oracle_max_vertices, budget)?;
        let comparison = compare(&filtration, &oracle);
        Ok(OrbitRun {
            profile: r.orbit_key(),
            filtration,
            oracle,
            comparison,
        })
    }

    /// The unit maps at the attaching profile, using a filtration of
    /// length one there.
    pub fn unit_maps(&self, budget: &Budget) -> Result<UnitMaps> {
        let f = filtration(&self.problem, &self.problem.s, 1, budget)?;
        attach_unit_maps(&self.problem, &f, budget)
    }

    pub fn profile_json(&self, p: &ProfilePair) -> ProfilePairJson {
        ProfilePairJson::from_pair(p, &self.colors)
    }
}

impl Scenario {
    pub fn filtration_json(&self, f: &Filtration) -> Value {
        let stages: Vec<Value> = f
            .stages
            .iter()
            .map(|st| {
                json!({
                    "k": st.k,
                    "size": st.size(),
                    "injective_from_previous": st.map_is_injective(),
                    "summands": st.summands.iter().filter(|x| x.induced_y > 0).map(|x| json!({
                        "key": x.key,
                        "aut_order": x.aut_order,
                        "decoration": x.decoration,
                        "q": x.q,
                        "y": x.y,
                        "induced_q": x.induced_q,
                        "induced_y": x.induced_y,
                    })).collect::<Vec<_>>(),
                    "empty_summands": st.summands.iter().filter(|x| x.induced_y == 0).count(),
                })
            })
            .collect();
        json!({
            "profile": self.profile_json(&f.profile),
            "stages": stages,
            "next_stage_new": f.next_new,
        })
    }

    pub fn oracle_json(&self, o: &OracleEntry) -> Value {
        json!({
            "profile": self.profile_json(&o.profile),
            "size": o.size(),
            "orbits": o.set.orbits().len(),
            "raw": o.raw,
            "steps": o.steps,
            "out_of_window": o.out_of_window,
        })
    }
}

impl OrbitRun {
    pub fn to_json(&self, sc: &Scenario) -> Value {
        let mut cmp = serde_json::to_value(&self.comparison).expect("plain data");
        if let Some(obj) = cmp.as_object_mut() {
            obj.remove("iso");
            obj.insert("iso_found".into(), json!(self.comparison.iso.is_some()));
            obj.insert("passed".into(), json!(self.comparison.passed()));
        }
        json!({
            "profile": sc.profile_json(&self.profile),
            "filtration": sc.filtration_json(&self.filtration),
            "oracle": sc.oracle_json(&self.oracle),
            "comparison": cmp,
        })
    }
}
