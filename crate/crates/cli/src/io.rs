//! Input parsing shared by the commands.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use props_engine::graph::GraphJson;
use props_engine::marked::MarkedGraph;
use props_engine::{ColorSet, Graph, ProfilePair};

use crate::{CliError, CliResult};

/// Parses a JSON document, keeping the position of the first error.
pub fn parse<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Format {
        message: e.to_string(),
        line: Some(e.line()),
        column: Some(e.column()),
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarkedJson {
    graph: GraphJson,
    #[serde(default)]
    ds: Vec<usize>,
}

/// A bare graph, or `{"graph": ..., "ds": [...]}`.
pub fn graph_json(text: &str) -> CliResult<(GraphJson, Vec<usize>)> {
    let v: Value = parse(text)?;
    if v.get("graph").is_some() {
        let m: MarkedJson = parse(text)?;
        Ok((m.graph, m.ds))
    } else {
        Ok((parse(text)?, Vec::new()))
    }
}

pub fn build(g: &GraphJson) -> CliResult<(ColorSet, Graph)> {
    Ok(g.to_graph()?)
}

pub fn read_graph(text: &str) -> CliResult<(ColorSet, Graph, Vec<usize>)> {
    let (g, ds) = graph_json(text)?;
    let (colors, g) = build(&g)?;
    if ds.iter().any(|&d| d >= g.num_vertices()) {
        return Err(CliError::Usage("a distinguished vertex is out of range".into()));
    }
    Ok((colors, g, ds))
}

pub fn read_marked(text: &str) -> CliResult<(ColorSet, MarkedGraph)> {
    let (colors, g, ds) = read_graph(text)?;
    Ok((colors, MarkedGraph::new(g, ds)?))
}

pub fn same_colors(a: &ColorSet, b: &ColorSet) -> CliResult<()> {
    if a.names() == b.names() {
        Ok(())
    } else {
        Err(CliError::Usage("all graphs must use the same color list".into()))
    }
}

pub fn graph_value(g: &Graph, colors: &ColorSet) -> Value {
    serde_json::to_value(GraphJson::from_graph(g, colors)).expect("graphs serialize")
}

pub fn profiles(texts: &[String], colors: &ColorSet) -> CliResult<Vec<ProfilePair>> {
    Ok(texts
        .iter()
        .map(|t| ProfilePair::parse(t, colors))
        .collect::<props_engine::Result<Vec<_>>>()?)
}
