//! The JSON graph format.

use serde::{Deserialize, Serialize};

use super::{Edge, EdgeKind, Graph, Port, Vertex};
use crate::error::{Error, Result};
use crate::profiles::{Color, ColorSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub colors: Vec<String>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub in_listing: Vec<usize>,
    pub out_listing: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    #[serde(rename = "in")]
    pub inputs: Vec<u32>,
    #[serde(rename = "out")]
    pub outputs: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EdgeJson {
    Internal {
        color: u32,
        src: [usize; 2],
        tgt: [usize; 2],
    },
    InLeg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        color: Option<u32>,
        tgt: [usize; 2],
    },
    OutLeg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        color: Option<u32>,
        src: [usize; 2],
    },
    ExcEdge {
        color: u32,
    },
    ExcLoop {
        color: u32,
    },
}

impl GraphJson {
    pub fn from_graph(g: &Graph, colors: &ColorSet) -> Self {
        let port = |p: Port| [p.vertex, p.port];
        GraphJson {
            colors: colors.names().to_vec(),
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexJson {
                    inputs: v.inputs.iter().map(|c| c.0).collect(),
                    outputs: v.outputs.iter().map(|c| c.0).collect(),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| {
                    let color = e.color.0;
                    match e.kind {
                        EdgeKind::Internal { src, tgt } => EdgeJson::Internal {
                            color,
                            src: port(src),
                            tgt: port(tgt),
                        },
                        EdgeKind::InputLeg { tgt } => EdgeJson::InLeg {
                            color: Some(color),
                            tgt: port(tgt),
                        },
                        EdgeKind::OutputLeg { src } => EdgeJson::OutLeg {
                            color: Some(color),
                            src: port(src),
                        },
                        EdgeKind::ExceptionalEdge => EdgeJson::ExcEdge { color },
                        EdgeKind::ExceptionalLoop => EdgeJson::ExcLoop { color },
                    }
                })
                .collect(),
            in_listing: g.in_listing().to_vec(),
            out_listing: g.out_listing().to_vec(),
        }
    }

    /// Validates and converts. Leg colors may be omitted; they are read
    /// off the port they touch.
    pub fn to_graph(&self) -> Result<(ColorSet, Graph)> {
        let colors = ColorSet::new(self.colors.iter().cloned())?;
        let color = |i: u32| -> Result<Color> {
            let c = Color(i);
            if colors.contains(c) {
                Ok(c)
            } else {
                Err(Error::UnknownColor(format!("color index {i}")))
            }
        };
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                Ok(Vertex::new(
                    v.inputs.iter().map(|&c| color(c)).collect::<Result<_>>()?,
                    v.outputs.iter().map(|&c| color(c)).collect::<Result<_>>()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let port_color = |p: [usize; 2], input: bool| -> Result<Color> {
            let v = vertices
                .get(p[0])
                .ok_or_else(|| Error::InvalidGraph(format!("no vertex {}", p[0])))?;
            let side = if input { &v.inputs } else { &v.outputs };
            side.get(p[1])
                .copied()
                .ok_or_else(|| Error::InvalidGraph(format!("no port {p:?}")))
        };
        let port = |p: [usize; 2]| Port::new(p[0], p[1]);
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(match *e {
                    EdgeJson::Internal { color: c, src, tgt } => {
                        Edge::internal(color(c)?, port(src), port(tgt))
                    }
                    EdgeJson::InLeg { color: c, tgt } => {
                        let c = match c {
                            Some(c) => color(c)?,
                            None => port_color(tgt, true)?,
                        };
                        Edge::input(c, port(tgt))
                    }
                    EdgeJson::OutLeg { color: c, src } => {
                        let c = match c {
                            Some(c) => color(c)?,
                            None => port_color(src, false)?,
                        };
                        Edge::output(c, port(src))
                    }
                    EdgeJson::ExcEdge { color: c } => Edge {
                        color: color(c)?,
                        kind: EdgeKind::ExceptionalEdge,
                    },
                    EdgeJson::ExcLoop { color: c } => Edge {
                        color: color(c)?,
                        kind: EdgeKind::ExceptionalLoop,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let g = Graph::new(
            vertices,
            edges,
            self.in_listing.clone(),
            self.out_listing.clone(),
        )?;
        Ok((colors, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::canonical_key;
    use crate::profiles::ProfilePair;

    #[test]
    fn round_trip_preserves_graph_and_key() {
        let colors = ColorSet::new(["a", "b"]).unwrap();
        let g = Graph::corolla(&ProfilePair::new(vec![Color(0), Color(1)], vec![Color(1)]));
        let text = serde_json::to_string(&GraphJson::from_graph(&g, &colors)).unwrap();
        let parsed: GraphJson = serde_json::from_str(&text).unwrap();
        let (cs, h) = parsed.to_graph().unwrap();
        assert_eq!(cs, colors);
        assert_eq!(h, g);
        assert_eq!(canonical_key(&h, &[]), canonical_key(&g, &[]));
    }

    #[test]
    fn leg_colors_may_be_omitted() {
        let text = r#"{"colors":["c"],"vertices":[{"in":[0],"out":[0]}],
            "edges":[{"kind":"in_leg","tgt":[0,0]},{"kind":"out_leg","src":[0,0]}],
            "in_listing":[0],"out_listing":[1]}"#;
        let (_, g) = serde_json::from_str::<GraphJson>(text).unwrap().to_graph().unwrap();
        assert_eq!(g.profile(), ProfilePair::unary(Color(0)));
    }

    #[test]
    fn exceptional_loop_parses() {
        let text = r#"{"colors":["c"],"vertices":[],"edges":[{"kind":"exc_loop","color":0}],
            "in_listing":[],"out_listing":[]}"#;
        let (_, g) = serde_json::from_str::<GraphJson>(text).unwrap().to_graph().unwrap();
        assert!(g.has_exceptional_loop());
    }
}
