use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::json;

use props_engine::graph::GraphJson;
use props_engine::ops::{extend, extend_both, shrink, shrink_set, substitute, Side};

use crate::args::{OpsCmd, SideArg};
use crate::io::{build, graph_value, parse, read_graph, same_colors};
use crate::{CliError, CliResult, Context, Report};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubstituteInput {
    graph: GraphJson,
    /// Vertex index (as a string key) to the graph substituted there.
    pieces: BTreeMap<String, GraphJson>,
}

pub fn run(ctx: &mut Context, cmd: &OpsCmd) -> CliResult<Report> {
    let text = ctx.input_text()?;
    let (colors, result) = match cmd {
        OpsCmd::Substitute => {
            let input: SubstituteInput = parse(&text)?;
            let (colors, g) = build(&input.graph)?;
            let mut assignment = BTreeMap::new();
            for (key, piece) in &input.pieces {
                let v: usize = key
                    .parse()
                    .map_err(|_| CliError::Usage(format!("piece key `{key}` is not a vertex index")))?;
                let (pc, h) = build(piece)?;
                same_colors(&colors, &pc)?;
                assignment.insert(v, h);
            }
            (colors, substitute(&g, &assignment)?)
        }
        OpsCmd::Extend { side } => {
            let (colors, g, _) = read_graph(&text)?;
            let h = match side {
                SideArg::Input => extend(&g, Side::Input),
                SideArg::Output => extend(&g, Side::Output),
                SideArg::Both => extend_both(&g),
            };
            (colors, h)
        }
        OpsCmd::Shrink { edge } => {
            let (colors, g, _) = read_graph(&text)?;
            (colors, shrink(&g, *edge)?)
        }
        OpsCmd::ShrinkSet { edges } => {
            let (colors, g, _) = read_graph(&text)?;
            let s = shrink_set(&g, edges)?;
            let dot = s.quotient.to_dot(Some(&colors));
            return Ok(Report::ok(json!({
                "quotient": graph_value(&s.quotient, &colors),
                "pieces": s.pieces.iter().map(|p| graph_value(p, &colors)).collect::<Vec<_>>(),
                "piece_vertices": s.piece_vertices,
                "edge_map": s.edge_map,
            }))
            .with_dot(dot));
        }
    };
    let dot = result.to_dot(Some(&colors));
    Ok(Report::ok(graph_value(&result, &colors)).with_dot(dot))
}
