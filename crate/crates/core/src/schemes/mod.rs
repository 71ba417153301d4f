//! Pasting schemes as decidable membership predicates.

mod check;
mod enumerate;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profiles::ProfilePair;

pub use check::{check_axioms, check_shrinkable, AxiomReport, Status};
pub use enumerate::{
    color_multisets, enumerate_graphs, profile_orbits, Bound, Universe, VertexFilter,
};

/// The built-in schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    ConnectedWheeled,
    WheeledTrees,
    SimplyConnected,
    UnitalTrees,
    UnitalLinear,
    ConnectedWheelFree,
}

impl Builtin {
    pub const ALL: [Builtin; 6] = [
        Builtin::ConnectedWheeled,
        Builtin::WheeledTrees,
        Builtin::SimplyConnected,
        Builtin::UnitalTrees,
        Builtin::UnitalLinear,
        Builtin::ConnectedWheelFree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::ConnectedWheeled => "connected-wheeled",
            Builtin::WheeledTrees => "wheeled-trees",
            Builtin::SimplyConnected => "simply-connected",
            Builtin::UnitalTrees => "unital-trees",
            Builtin::UnitalLinear => "unital-linear",
            Builtin::ConnectedWheelFree => "connected-wheel-free",
        }
    }

    /// Accepts the canonical names and a few short aliases.
    pub fn from_name(name: &str) -> Result<Self> {
        let alias = match name {
            "wheeled" => Some(Builtin::ConnectedWheeled),
            "wheeled-tree" => Some(Builtin::WheeledTrees),
            "unital-tree" => Some(Builtin::UnitalTrees),
            "wheel-free" => Some(Builtin::ConnectedWheelFree),
            _ => None,
        };
        alias
            .or_else(|| Builtin::ALL.into_iter().find(|b| b.name() == name))
            .ok_or_else(|| Error::UnsupportedScheme(name.to_string()))
    }

    fn profile_ok(self, p: &ProfilePair) -> bool {
        match self {
            Builtin::WheeledTrees => p.outputs.len() <= 1,
            Builtin::UnitalTrees => p.outputs.len() == 1,
            Builtin::UnitalLinear => p.inputs.len() == 1 && p.outputs.len() == 1,
            _ => true,
        }
    }

    /// Upper bounds on the inputs and outputs of a vertex.
    fn port_caps(self) -> (usize, usize) {
        match self {
            Builtin::WheeledTrees | Builtin::UnitalTrees => (usize::MAX, 1),
            Builtin::UnitalLinear => (1, 1),
            _ => (usize::MAX, usize::MAX),
        }
    }

    fn forest(self) -> bool {
        matches!(
            self,
            Builtin::SimplyConnected | Builtin::UnitalTrees | Builtin::UnitalLinear
        )
    }

    fn graph_ok(self, g: &Graph) -> bool {
        let vertices_ok = g.vertices().iter().all(|v| self.profile_ok(&v.profile()));
        vertices_ok
            && self.profile_ok(&g.profile())
            && match self {
                Builtin::ConnectedWheeled | Builtin::WheeledTrees => true,
                Builtin::ConnectedWheelFree => !g.has_directed_cycle(),
                _ => g.cycle_rank() == 0 && !g.has_exceptional_loop(),
            }
    }

    pub fn shrinkable(self) -> bool {
        self != Builtin::ConnectedWheelFree
    }

    /// Whether `↻` and other directed cycles may occur.
    pub fn wheeled(self) -> bool {
        matches!(self, Builtin::ConnectedWheeled | Builtin::WheeledTrees)
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type ProfilePredicate = Arc<dyn Fn(&ProfilePair) -> bool + Send + Sync>;
pub type GraphPredicate = Arc<dyn Fn(&Graph) -> bool + Send + Sync>;

/// A pasting scheme `(S, G)`: a profile predicate, a graph predicate and
/// the declared shrinkability.
#[derive(Clone)]
pub struct PastingScheme {
    name: String,
    builtin: Option<Builtin>,
    profile_pred: ProfilePredicate,
    graph_pred: GraphPredicate,
    shrinkable: bool,
}

impl fmt::Debug for PastingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PastingScheme")
            .field("name", &self.name)
            .field("shrinkable", &self.shrinkable)
            .finish()
    }
}

impl PastingScheme {
    pub fn builtin(b: Builtin) -> Self {
        PastingScheme {
            name: b.name().to_string(),
            builtin: Some(b),
            profile_pred: Arc::new(move |p| b.profile_ok(p)),
            graph_pred: Arc::new(move |g| b.graph_ok(g)),
            shrinkable: b.shrinkable(),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Builtin::from_name(name).map(PastingScheme::builtin)
    }

    /// A user scheme. The graph predicate should be invariant under weak
    /// isomorphism; the checkers only ever explore a bounded universe.
    pub fn custom(
        name: impl Into<String>,
        profile_pred: ProfilePredicate,
        graph_pred: GraphPredicate,
        shrinkable: bool,
    ) -> Self {
        PastingScheme {
            name: name.into(),
            builtin: None,
            profile_pred,
            graph_pred,
            shrinkable,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn as_builtin(&self) -> Option<Builtin> {
        self.builtin
    }

    /// Upper bounds on the inputs and outputs of any vertex of a member.
    pub fn port_caps(&self) -> (usize, usize) {
        self.builtin.map_or((usize::MAX, usize::MAX), Builtin::port_caps)
    }

    pub fn shrinkable_flag(&self) -> bool {
        self.shrinkable
    }

    pub fn profile_in_s(&self, p: &ProfilePair) -> bool {
        (self.profile_pred)(p)
    }

    pub fn member(&self, g: &Graph) -> bool {
        (self.graph_pred)(g)
    }

    /// The smallest enumeration universe containing every member within
    /// `bound`, pruned by the shape of the built-in schemes.
    pub fn universe(&self, bound: Bound) -> Universe {
        match self.builtin {
            Some(b) => Universe {
                bound,
                vertex_ok: Arc::new(move |p| b.profile_ok(p)),
                forest: b.forest(),
                acyclic: b == Builtin::ConnectedWheelFree,
                exceptional_loops: b.wheeled(),
            },
            None => Universe::all(bound),
        }
    }
}

pub fn member(scheme: &PastingScheme, g: &Graph) -> bool {
    scheme.member(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Port, Vertex};
    use crate::profiles::Color;

    const C: Color = Color(0);

    fn walnut() -> Graph {
        Graph::new(
            vec![Vertex::new(vec![], vec![C, C]), Vertex::new(vec![C, C], vec![])],
            vec![
                Edge::internal(C, Port::new(0, 0), Port::new(1, 0)),
                Edge::internal(C, Port::new(0, 1), Port::new(1, 1)),
            ],
            vec![],
            vec![],
        )
        .unwrap()
    }

    fn loop_graph() -> Graph {
        Graph::new(
            vec![Vertex::new(vec![C], vec![C])],
            vec![Edge::internal(C, Port::new(0, 0), Port::new(0, 0))],
            vec![],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn walnut_membership() {
        let wf = PastingScheme::builtin(Builtin::ConnectedWheelFree);
        let wh = PastingScheme::builtin(Builtin::ConnectedWheeled);
        assert!(wf.member(&walnut()));
        assert!(wh.member(&walnut()));
        assert!(!wf.member(&loop_graph()));
        assert!(wh.member(&loop_graph()));
    }

    #[test]
    fn unit_edge_everywhere() {
        for b in Builtin::ALL {
            assert!(PastingScheme::builtin(b).member(&Graph::exceptional_edge(C)), "{b}");
        }
    }

    #[test]
    fn names_round_trip() {
        for b in Builtin::ALL {
            assert_eq!(Builtin::from_name(b.name()).unwrap(), b);
        }
        assert!(Builtin::from_name("nope").is_err());
    }

    #[test]
    fn wheeled_trees_allow_loops_not_two_outputs() {
        let wt = PastingScheme::builtin(Builtin::WheeledTrees);
        assert!(wt.member(&loop_graph()));
        assert!(wt.member(&Graph::exceptional_loop(C)));
        assert!(!wt.member(&walnut()));
    }
}
