use serde::Deserialize;
use serde_json::{json, Value};

use props_engine::graph::{automorphisms, canonical_form, strict_iso, weak_iso, GraphJson, Isomorphism};
use props_engine::profiles::ProfilePairJson;
use props_engine::Error;

use crate::args::GraphCmd;
use crate::io::{build, graph_json, graph_value, parse, read_graph, same_colors};
use crate::{CliError, CliResult, Context, Report};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IsoInput {
    g: GraphJson,
    h: GraphJson,
    #[serde(default)]
    marks_g: Vec<usize>,
    #[serde(default)]
    marks_h: Vec<usize>,
}

fn iso_value(iso: &Isomorphism) -> Value {
    json!({ "vertex_map": iso.vertex_map, "edge_map": iso.edge_map })
}

pub fn run(ctx: &mut Context, cmd: &GraphCmd) -> CliResult<Report> {
    let text = ctx.input_text()?;
    match cmd {
        GraphCmd::Validate => {
            let (g, _) = graph_json(&text)?;
            Ok(match g.to_graph() {
                Ok((colors, g)) => Report::ok(json!({
                    "valid": true,
                    "vertices": g.num_vertices(),
                    "edges": g.num_edges(),
                    "profile": g.profile().display(&colors),
                })),
                Err(e @ (Error::InvalidGraph(_) | Error::UnknownColor(_))) => {
                    Report::check(false, json!({ "valid": false, "reason": e.to_string() }))
                }
                Err(e) => return Err(e.into()),
            })
        }
        GraphCmd::Profile => {
            let (colors, g, _) = read_graph(&text)?;
            let p = g.profile();
            Ok(Report::ok(json!({
                "profile": ProfilePairJson::from_pair(&p, &colors),
                "display": p.display(&colors),
                "orbit": p.orbit_key().display(&colors),
            })))
        }
        GraphCmd::Iso { strict } => {
            let input: IsoInput = parse(&text)?;
            let (cg, g) = build(&input.g)?;
            let (ch, h) = build(&input.h)?;
            same_colors(&cg, &ch)?;
            let marks = Some((input.marks_g.as_slice(), input.marks_h.as_slice()));
            let found = if *strict { strict_iso(&g, &h, marks) } else { weak_iso(&g, &h, marks) };
            Ok(match found {
                Some(iso) => Report::ok(json!({ "iso": true, "map": iso_value(&iso) })),
                None => Report::check(false, json!({ "iso": false })),
            })
        }
        GraphCmd::Canon => {
            let (colors, g, ds) = read_graph(&text)?;
            let c = canonical_form(&g, &ds);
            let dot = c.rep.to_dot(Some(&colors));
            Ok(Report::ok(json!({
                "key": c.key,
                "graph": graph_value(&c.rep, &colors),
                "ds": c.rep_marks,
                "map": iso_value(&c.iso),
            }))
            .with_dot(dot))
        }
        GraphCmd::Aut { cap } => {
            let (_, g, ds) = read_graph(&text)?;
            let cap = cap.unwrap_or(ctx.budget.aut_cap);
            let auts = automorphisms(&g, &ds, cap).map_err(CliError::from)?;
            Ok(Report::ok(json!({
                "order": auts.len(),
                "automorphisms": auts.iter().map(iso_value).collect::<Vec<_>>(),
            })))
        }
    }
}
