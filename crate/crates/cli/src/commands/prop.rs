use serde::Deserialize;
use serde_json::{json, Value};

use props_engine::prop::{collection_from_json, filtration, pushout_oracle, EntryJson, FreeProp, Scenario, ScenarioJson};
use props_engine::schemes::{profile_orbits, PastingScheme};
use props_engine::{ColorSet, ProfilePair};

use crate::args::{OrbitArgs, PropCmd};
use crate::io::{graph_value, parse, profiles};
use crate::{CliError, CliResult, Context, Report};

/// Default filtration length for profiles given on the command line.
const DEFAULT_KMAX: usize = 2;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FreeInput {
    scheme: String,
    colors: Vec<String>,
    max_vertices: usize,
    #[serde(default)]
    generators: Vec<EntryJson>,
}

/// The explicitly requested orbits, if any, each with `None` for "use the
/// default length".
fn requested(o: &OrbitArgs, colors: &ColorSet, scheme: &PastingScheme) -> CliResult<Option<Vec<ProfilePair>>> {
    let mut out = profiles(&o.r, colors)?;
    if let Some(n) = o.rmax {
        out.extend(profile_orbits(colors.len(), n).into_iter().filter(|p| scheme.profile_in_s(p)));
    }
    let mut seen = Vec::new();
    out.retain(|p| {
        let k = p.orbit_key();
        let fresh = !seen.contains(&k);
        seen.push(k);
        fresh
    });
    Ok((!o.r.is_empty() || o.rmax.is_some()).then_some(out))
}

fn scenario_orbits(sc: &Scenario, o: &OrbitArgs, kmax: Option<usize>) -> CliResult<Vec<(ProfilePair, usize)>> {
    Ok(match requested(o, &sc.colors, &sc.problem.a.scheme)? {
        Some(list) => list.into_iter().map(|r| (r, kmax.unwrap_or(DEFAULT_KMAX))).collect(),
        None => sc.orbits.iter().map(|(r, k)| (r.clone(), kmax.unwrap_or(*k))).collect(),
    })
}

fn scenario(text: &str) -> CliResult<Scenario> {
    let json: ScenarioJson = parse(text)?;
    Ok(json.build()?)
}

pub fn run(ctx: &mut Context, cmd: &PropCmd) -> CliResult<Report> {
    let text = ctx.input_text()?;
    let budget = ctx.budget;
    match cmd {
        PropCmd::Free { orbits, list } => {
            let input: FreeInput = parse(&text)?;
            let colors = ColorSet::new(input.colors.iter().cloned())?;
            let scheme = PastingScheme::by_name(&input.scheme)?;
            let z = collection_from_json(&input.generators, &colors)?;
            let a = FreeProp::new(scheme.clone(), z, colors.len(), input.max_vertices);
            let rs = requested(orbits, &colors, &scheme)?
                .ok_or_else(|| CliError::Usage("give --r or --rmax".into()))?;
            let entries = rs
                .iter()
                .map(|r| {
                    let e = a.entry(r)?;
                    let mut v = json!({
                        "profile": r.orbit_key().display(&colors),
                        "size": e.len(),
                        "orbits": e.set.orbits().len(),
                        "free": e.set.is_free(),
                    });
                    if *list {
                        v["elements"] = e
                            .elements
                            .iter()
                            .map(|d| {
                                json!({
                                    "graph": graph_value(&d.graph, &colors),
                                    "labels": d.labels.iter().map(|&l| a.alpha.name(l)).collect::<Vec<_>>(),
                                })
                            })
                            .collect();
                    }
                    Ok(v)
                })
                .collect::<props_engine::Result<Vec<Value>>>()?;
            Ok(Report::ok(json!({ "scheme": scheme.name(), "entries": entries })))
        }
        PropCmd::PushoutOracle { orbits } => {
            let sc = scenario(&text)?;
            let out = scenario_orbits(&sc, orbits, None)?
                .iter()
                .map(|(r, _)| {
                    pushout_oracle(&sc.problem, r, sc.json.oracle_max_vertices, &budget).map(|o| sc.oracle_json(&o))
                })
                .collect::<props_engine::Result<Vec<_>>>()?;
            Ok(Report::ok(json!({ "scenario": sc.json.name, "orbits": out })))
        }
        PropCmd::Filtration { orbits, kmax } => {
            let sc = scenario(&text)?;
            let out = scenario_orbits(&sc, orbits, *kmax)?
                .iter()
                .map(|(r, k)| filtration(&sc.problem, r, *k, &budget).map(|f| sc.filtration_json(&f)))
                .collect::<props_engine::Result<Vec<_>>>()?;
            Ok(Report::ok(json!({ "scenario": sc.json.name, "orbits": out })))
        }
        PropCmd::Compare { orbits, kmax } => {
            let sc = scenario(&text)?;
            let mut pass = true;
            let mut out = Vec::new();
            for (r, k) in scenario_orbits(&sc, orbits, *kmax)? {
                let run = sc.run_orbit(&r, k, &budget)?;
                pass &= run.comparison.passed();
                out.push(run.to_json(&sc));
            }
            let units = sc.unit_maps(&budget)?;
            let units_ok = units.is_corolla.iter().chain(&units.coherent).all(|&b| b);
            pass &= units_ok;
            Ok(Report::check(
                pass,
                json!({
                    "scenario": sc.json.name,
                    "passed": pass,
                    "orbits": out,
                    "unit_maps": {
                        "map": units.map,
                        "is_corolla": units.is_corolla,
                        "coherent": units.coherent,
                        "passed": units_ok,
                    },
                }),
            ))
        }
    }
}
