use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use props_engine::equivariant::{
    induce, matrix_from_strings, matrix_to_strings, pushout, q_construction, Embedding, EquivariantMap,
    EquivariantObject, FiniteGroup, GroupJson, MapData, SetMap,
};
use props_engine::equivariant::ObjectJson;

use crate::args::EquiCmd;
use crate::io::parse;
use crate::{CliError, CliResult, Context, Report};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InduceInput {
    group: GroupJson,
    /// Image in `group` of every element of the object's group.
    embedding: Vec<usize>,
    object: ObjectJson,
}

/// A function as a list of images, or a matrix of rationals `"p/q"`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MapJson {
    Function(Vec<usize>),
    Linear(Vec<Vec<String>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PushoutInput {
    c: ObjectJson,
    a: ObjectJson,
    b: ObjectJson,
    f: MapJson,
    g: MapJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QInput {
    x: usize,
    y: usize,
    i: Vec<usize>,
    t: usize,
}

fn map_data(m: &MapJson, source: &EquivariantObject, target: &EquivariantObject) -> CliResult<MapData> {
    Ok(match m {
        MapJson::Function(f) => MapData::Function(f.clone()),
        MapJson::Linear(rows) => MapData::Linear(matrix_from_strings(target.size(), source.size(), rows)?),
    })
}

fn map_json(m: &MapData) -> MapJson {
    match m {
        MapData::Function(f) => MapJson::Function(f.clone()),
        MapData::Linear(a) => MapJson::Linear(matrix_to_strings(a)),
    }
}

fn object(o: &ObjectJson) -> CliResult<(Arc<FiniteGroup>, EquivariantObject)> {
    let group = Arc::new(o.group().build()?);
    let x = o.to_object(group.clone())?;
    Ok((group, x))
}

pub fn run(ctx: &mut Context, cmd: &EquiCmd) -> CliResult<Report> {
    let text = ctx.input_text()?;
    match cmd {
        EquiCmd::Induce => {
            let input: InduceInput = parse(&text)?;
            let group = Arc::new(input.group.build()?);
            let (sub, x) = object(&input.object)?;
            let emb = Embedding::new(&sub, &group, input.embedding.clone())?;
            let induced = induce(group, &emb, &x)?;
            Ok(Report::ok(json!({
                "object": ObjectJson::from_object(&induced, input.group.clone(), None),
                "size": induced.size(),
            })))
        }
        EquiCmd::Pushout => {
            let input: PushoutInput = parse(&text)?;
            if input.a.group() != input.c.group() || input.b.group() != input.c.group() {
                return Err(CliError::Usage("c, a and b must carry the same group".into()));
            }
            let (group, c) = object(&input.c)?;
            let a = input.a.to_object(group.clone())?;
            let b = input.b.to_object(group)?;
            let f = EquivariantMap::new(c.clone(), a.clone(), map_data(&input.f, &c, &a)?)?;
            let g = EquivariantMap::new(c.clone(), b.clone(), map_data(&input.g, &c, &b)?)?;
            let p = pushout(&f, &g)?;
            Ok(Report::ok(json!({
                "object": ObjectJson::from_object(&p.object, input.c.group().clone(), None),
                "size": p.object.size(),
                "from_a": map_json(&p.from_a),
                "from_b": map_json(&p.from_b),
            })))
        }
        EquiCmd::Q => {
            let input: QInput = parse(&text)?;
            let i = SetMap::new(input.x, input.y, input.i.clone())?;
            let q = q_construction(&i, input.t)?;
            let pp = q.pushout_product().map(|(obj, to_y)| {
                let mut seen = vec![false; q.top().size()];
                let injective = to_y.iter().all(|&y| !std::mem::replace(&mut seen[y], true));
                json!({ "size": obj.size(), "injective_into_top": injective })
            });
            Ok(Report::ok(json!({
                "t": input.t,
                "injective": i.is_injective(),
                "sizes": q.sizes(),
                "stage_maps": q.maps,
                "pushout_product": pp,
            })))
        }
        EquiCmd::Freecheck => {
            let input: ObjectJson = parse(&text)?;
            let (_, x) = object(&input)?;
            let check = x.is_free_action()?;
            Ok(Report::check(check.free, json!(check)))
        }
    }
}
