//! The acceptance suite: one line per criterion, each with its own time
//! limit. Runs without the libtest harness so the lines always print.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use serde_json::Value;

use oracles::{
    brute_automorphism_count, brute_key, brute_strict_iso, brute_weak_iso, is_reduced, is_well_marked,
    q_closed_form, reduced_by_filter,
};
use props_engine::budget::Budget;
use props_engine::equivariant::q::Tag;
use props_engine::equivariant::{q_construction, EquivariantObject, GSet, SetMap};
use props_engine::graph::{strict_iso, GraphJson};
use props_engine::marked::{
    classify_marking, enumerate_reduced, reduce, reduce_in_order, substitute_marked, MarkedGraph, MarkingClass,
};
use props_engine::ops::shrink;
use props_engine::prop::{decorate, AutGroup, Collection, EntrySet, FreeProp, Scenario};
use props_engine::sample::Sampler;
use props_engine::schemes::{check_shrinkable, profile_orbits, Bound, Builtin, PastingScheme, Status};
use props_engine::{Color, Edge, Graph, Port, ProfilePair, Vertex};

type Outcome = Result<String, String>;

/// Criterion number, name, elapsed time, time limit and outcome.
type Line = (u8, &'static str, Duration, Duration, Outcome);

const C: Color = Color(0);
const SEED: u64 = 20_261_016;

const SHRINKABLE: [Builtin; 5] = [
    Builtin::ConnectedWheeled,
    Builtin::WheeledTrees,
    Builtin::SimplyConnected,
    Builtin::UnitalTrees,
    Builtin::UnitalLinear,
];

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl Display) -> String {
    e.to_string()
}

fn pp(i: usize, o: usize) -> ProfilePair {
    ProfilePair::new(vec![C; i], vec![C; o])
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut diag = Vec::new();
    let argv = std::iter::once("props").chain(args.iter().copied());
    let code = props_cli::run(argv, &mut std::io::empty(), &mut out, &mut diag);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

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
    .expect("walnut")
}

fn one_vertex_loop() -> Graph {
    Graph::new(
        vec![Vertex::new(vec![C], vec![C])],
        vec![Edge::internal(C, Port::new(0, 0), Port::new(0, 0))],
        vec![],
        vec![],
    )
    .expect("loop graph")
}

/// `n` unary vertices in a row, with one input and one output leg.
fn chain(n: usize) -> Graph {
    let mut edges = vec![Edge::input(C, Port::new(0, 0))];
    edges.extend((1..n).map(|v| Edge::internal(C, Port::new(v - 1, 0), Port::new(v, 0))));
    edges.push(Edge::output(C, Port::new(n - 1, 0)));
    Graph::with_default_listings(vec![Vertex::new(vec![C], vec![C]); n], edges).expect("chain")
}

fn walnut_counterexample() -> Outcome {
    let w = walnut();
    let wheel_free = PastingScheme::by_name("wheel-free").map_err(err)?;
    let wheeled = PastingScheme::by_name("wheeled").map_err(err)?;
    ensure(wheel_free.member(&w), "the walnut should be wheel-free")?;
    for e in 0..2 {
        let s = shrink(&w, e).map_err(err)?;
        ensure(brute_weak_iso(&s, &[], &one_vertex_loop(), &[]), format!("shrinking edge {e} is not a loop graph"))?;
        ensure(!wheel_free.member(&s), format!("shrinking edge {e} stays wheel-free"))?;
        ensure(wheeled.member(&s), format!("shrinking edge {e} leaves the wheeled scheme"))?;
    }
    let (code, out) = cli(&["scheme", "check-shrink", "--scheme", "wheel-free"]);
    ensure(code == 1, format!("check-shrink exited with {code}"))?;
    let report: Value = serde_json::from_str(&out).map_err(err)?;
    let witness: GraphJson = serde_json::from_value(report["witness"].clone()).map_err(err)?;
    let (_, g) = witness.to_graph().map_err(err)?;
    ensure(brute_weak_iso(&g, &[], &w, &[]), "the reported witness is not the walnut")?;
    Ok(format!("witness is the walnut after {} graphs", report["checked"]))
}

fn five_schemes_shrinkable() -> Outcome {
    let budget = Budget::default();
    let mut checked = 0;
    for b in SHRINKABLE {
        let r = check_shrinkable(&PastingScheme::builtin(b), Bound::new(4, 10, 1), &budget);
        ensure(r.status == Status::Pass, format!("{b}: {:?} {}", r.status, r.detail))?;
        checked += r.checked;
    }
    Ok(format!("{checked} graphs checked"))
}

fn substitution_laws() -> Outcome {
    const WANT: usize = 1000;
    let budget = Budget::default();
    let mut samplers = Builtin::ALL
        .iter()
        .map(|&b| Sampler::new(&PastingScheme::builtin(b), Bound::new(3, 8, 1), SEED, &budget))
        .collect::<props_engine::Result<Vec<_>>>()
        .map_err(err)?;
    let (mut assoc, mut unit, mut brute) = (0, 0, 0);
    for attempt in 0..20 * WANT {
        if assoc >= WANT && unit >= WANT {
            break;
        }
        let sampler = &mut samplers[attempt % Builtin::ALL.len()];
        if assoc < WANT {
            if let Some(pair) = sampler.associativity_pair() {
                let (l, r) = pair.map_err(|e| format!("{}: associativity: {e}", sampler.scheme.name()))?;
                ensure(strict_iso(&l, &r, None).is_some(), format!("{}: associativity fails", sampler.scheme.name()))?;
                if l.num_vertices() <= 6 {
                    ensure(brute_strict_iso(&l, &r), "the oracle disagrees on associativity")?;
                    brute += 1;
                }
                assoc += 1;
            }
        }
        if unit < WANT {
            if let Some(triple) = sampler.unit_triple() {
                let (g, inside, outside) = triple.map_err(|e| format!("{}: unit: {e}", sampler.scheme.name()))?;
                for h in [&inside, &outside] {
                    ensure(strict_iso(h, &g, None).is_some(), format!("{}: unit law fails", sampler.scheme.name()))?;
                    if g.num_vertices() <= 6 {
                        ensure(brute_strict_iso(h, &g), "the oracle disagrees on a unit law")?;
                    }
                }
                unit += 1;
            }
        }
    }
    ensure(assoc == WANT && unit == WANT, format!("only {assoc} and {unit} instances drawn"))?;
    Ok(format!("{assoc} triples, {unit} unit instances, {brute} triples rechecked by brute force"))
}

fn reduction() -> Outcome {
    const WANT: usize = 500;
    const ORDERS: usize = 10;
    let budget = Budget::default();
    let mut nontrivial = 0;
    for b in SHRINKABLE {
        let scheme = PastingScheme::builtin(b);
        let mut sampler = Sampler::new(&scheme, Bound::new(4, 10, 1), SEED, &budget).map_err(err)?;
        for _ in 0..WANT {
            let m = sampler.well_marked().ok_or(format!("{b}: no well-marked members"))?;
            let red = reduce(&m, &scheme).map_err(err)?;
            let r = &red.reduced;
            ensure(is_reduced(&r.graph, &r.ds), format!("{b}: a reduction is not reduced"))?;
            ensure(classify_marking(r) == MarkingClass::Reduced, format!("{b}: classified as not reduced"))?;
            ensure(scheme.member(&r.graph), format!("{b}: a reduction leaves the scheme"))?;
            let again = reduce(r, &scheme).map_err(err)?.reduced;
            ensure(again.key() == r.key(), format!("{b}: reduce is not idempotent"))?;
            ensure(brute_weak_iso(&again.graph, &again.ds, &r.graph, &r.ds), format!("{b}: the oracle sees a change"))?;
            let key = r.key();
            for _ in 0..ORDERS {
                let mut order = red.edges.clone();
                order.shuffle(sampler.rng());
                let other = reduce_in_order(&m, &order).map_err(err)?.reduced;
                ensure(other.key() == key, format!("{b}: the result depends on the shrink order"))?;
            }
            nontrivial += usize::from(!red.edges.is_empty());
        }
    }
    Ok(format!(
        "{} graphs, {nontrivial} with edges to shrink, {ORDERS} orders each",
        WANT * SHRINKABLE.len()
    ))
}

fn marked_substitution() -> Outcome {
    const WANT: usize = 500;
    let budget = Budget::default();
    let mut samplers = Builtin::ALL
        .iter()
        .map(|&b| Sampler::new(&PastingScheme::builtin(b), Bound::new(4, 10, 1), SEED, &budget))
        .collect::<props_engine::Result<Vec<_>>>()
        .map_err(err)?;
    let (mut formed, mut not_reduced) = (0, 0);
    for attempt in 0..40 * WANT {
        if formed == WANT {
            break;
        }
        let sampler = &mut samplers[attempt % Builtin::ALL.len()];
        let Some(k) = sampler.member() else { continue };
        let pieces: Option<Vec<MarkedGraph>> = k
            .vertices()
            .iter()
            .map(|v| sampler.well_marked_with_profile(&v.profile()))
            .collect();
        let Some(pieces) = pieces else { continue };
        for p in &pieces {
            ensure(is_well_marked(&p.graph, &p.ds), "a sampled piece is not well-marked")?;
        }
        let name = sampler.scheme.name().to_string();
        let m = substitute_marked(&k, &pieces).map_err(|e| format!("{name}: {e}"))?;
        ensure(is_well_marked(&m.graph, &m.ds), format!("{name}: wellness is lost"))?;
        ensure(classify_marking(&m) != MarkingClass::Plain, format!("{name}: classified as plain"))?;
        let marks: usize = pieces.iter().map(|p| p.ds.len()).sum();
        ensure(m.ds.len() == marks, format!("{name}: distinguished vertices were lost"))?;
        ensure(sampler.scheme.member(&m.graph), format!("{name}: the result leaves the scheme"))?;
        not_reduced += usize::from(!is_reduced(&m.graph, &m.ds));
        formed += 1;
    }
    ensure(formed == WANT, format!("only {formed} instances drawn"))?;
    // two reduced chains n→d→n glued end to end meet in a normal–normal edge
    let piece = MarkedGraph::new(chain(3), vec![1]).map_err(err)?;
    let m = substitute_marked(&chain(2), &[piece.clone(), piece]).map_err(err)?;
    ensure(is_well_marked(&m.graph, &m.ds), "the glued chains are not well-marked")?;
    ensure(!is_reduced(&m.graph, &m.ds), "the glued chains are reduced")?;
    ensure(classify_marking(&m) == MarkingClass::WellMarked, "the glued chains are misclassified")?;
    Ok(format!("{formed} instances, {not_reduced} of them not reduced; glued chains well-marked, not reduced"))
}

/// Engine and oracle agree as sets of engine keys and of brute-force keys.
fn agree(scheme: &str, r: ProfilePair, s: ProfilePair, k: usize) -> Result<usize, String> {
    let scheme = PastingScheme::by_name(scheme).map_err(err)?;
    let budget = Budget::default();
    let fast = enumerate_reduced(&scheme, &r, &s, k, &budget).map_err(err)?;
    let slow = reduced_by_filter(&scheme, &r, &s, k, 1, &budget).map_err(err)?;
    let fast_keys: BTreeSet<_> = fast.iter().map(|c| c.key.clone()).collect();
    let slow_keys: BTreeSet<_> = slow.iter().map(MarkedGraph::key).collect();
    let fast_brute: BTreeSet<_> = fast.iter().map(|c| brute_key(&c.marked.graph, &c.marked.ds)).collect();
    let slow_brute: BTreeSet<_> = slow.iter().map(|m| brute_key(&m.graph, &m.ds)).collect();
    let label = format!("{} r={r:?} s={s:?} k={k}", scheme.name());
    ensure(fast_keys == slow_keys, format!("{label}: key sets differ"))?;
    ensure(fast_brute == slow_brute, format!("{label}: brute key sets differ"))?;
    ensure(fast.len() == slow.len() && fast.len() == fast_keys.len(), format!("{label}: duplicates"))?;
    Ok(fast.len())
}

fn enumeration_vs_oracle() -> Outcome {
    let mut counts = Vec::new();
    for k in 1..=3 {
        counts.push(agree("unital-linear", pp(1, 1), pp(1, 1), k)?);
    }
    for n in 2..=3 {
        for k in 1..=2 {
            counts.push(agree("unital-trees", pp(n, 1), pp(2, 1), k)?);
        }
    }
    counts.push(agree("simply-connected", pp(1, 1), pp(1, 1), 1)?);
    counts.push(agree("simply-connected", pp(1, 1), pp(1, 1), 2)?);
    counts.push(agree("simply-connected", pp(2, 1), pp(1, 2), 1)?);
    Ok(format!("{} cases, class counts {counts:?}", counts.len()))
}

/// Every injective map from `0..nx` to `0..ny`.
fn injections(nx: usize, ny: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..nx {
        out = out
            .into_iter()
            .flat_map(|f: Vec<usize>| {
                (0..ny)
                    .filter(|y| !f.contains(y))
                    .map(|y| [f.clone(), vec![y]].concat())
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

fn q_sizes() -> Outcome {
    let mut towers = 0;
    for nx in 0..=3 {
        for ny in nx..=4 {
            for f in injections(nx, ny) {
                let i = SetMap::new(nx, ny, f.clone()).map_err(err)?;
                for t in 0..=4usize {
                    let label = format!("|X|={nx} |Y|={ny} i={f:?} t={t}");
                    let q = q_construction(&i, t).map_err(err)?;
                    let sizes: Vec<u128> = q.sizes().iter().map(|&s| s as u128).collect();
                    let expected: Vec<u128> = (0..=t).map(|j| q_closed_form(nx, ny, t, j)).collect();
                    ensure(sizes == expected, format!("{label}: sizes {sizes:?}, expected {expected:?}"))?;
                    let bottom = &q.stages[0];
                    ensure(
                        bottom.size() == nx.pow(t as u32)
                            && bottom.members.iter().all(|m| m[0].iter().all(|x| matches!(x, Tag::X(_)))),
                        format!("{label}: the bottom stage is not X^t"),
                    )?;
                    let mut hit: Vec<usize> = q.top().to_y.clone();
                    hit.sort_unstable();
                    ensure(
                        hit == (0..ny.pow(t as u32)).collect::<Vec<_>>(),
                        format!("{label}: the top stage is not Y^t"),
                    )?;
                    if nx == 0 && t > 0 {
                        ensure(q.stages[t - 1].size() == 0, format!("{label}: Q_(t-1) is not empty"))?;
                    }
                    for (j, m) in q.maps.iter().enumerate() {
                        let distinct: BTreeSet<_> = m.iter().collect();
                        ensure(
                            distinct.len() == m.len() && q.stages[j].set.is_equivariant(&q.stages[j + 1].set, m),
                            format!("{label}: stage map {j} is not an equivariant injection"),
                        )?;
                    }
                    towers += 1;
                }
            }
        }
    }
    Ok(format!("{towers} towers"))
}

fn scenario_path(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Criteria 8 and 9 share one run of the filtrations.
fn filtration_vs_oracle() -> (Outcome, Outcome) {
    let mut isos = Vec::new();
    let mut maps = 0;
    let mut run = || -> Result<(), (String, bool)> {
        let budget = Budget::default();
        for name in ["unital-linear-category.json", "unital-trees-binary.json"] {
            let text = std::fs::read_to_string(scenario_path(name)).map_err(|e| (err(e), true))?;
            let sc = Scenario::parse(&text).map_err(|e| (err(e), true))?;
            for (r, k) in &sc.orbits {
                let run = sc.run_orbit(r, *k, &budget).map_err(|e| (err(e), true))?;
                let label = format!("{name} at {r}");
                for stage in &run.filtration.stages[1..] {
                    let image: BTreeSet<_> = stage.from_previous.iter().collect();
                    if image.len() != stage.from_previous.len() {
                        return Err((format!("{label}: h_{} is not injective", stage.k), false));
                    }
                    maps += 1;
                }
                let top = run.filtration.top();
                let oracle = &run.oracle;
                let iso = run.comparison.iso.clone().ok_or((format!("{label}: no isomorphism"), true))?;
                let image: BTreeSet<_> = iso.iter().collect();
                let bijective = iso.len() == oracle.size() && image.len() == iso.len();
                let equivariant = top
                    .set
                    .group
                    .elements()
                    .all(|g| (0..top.size()).all(|e| iso[top.set.act(g, e)] == oracle.set.act(g, iso[e])));
                if !bijective || !equivariant || !run.comparison.passed() {
                    return Err((format!("{label}: the bijection is not an equivariant isomorphism"), true));
                }
                isos.push(top.size());
            }
        }
        Ok(())
    };
    match run() {
        Ok(()) => (
            Ok(format!("{} orbits matched, sizes {isos:?}", isos.len())),
            Ok(format!("{maps} stage maps injective")),
        ),
        Err((msg, true)) => (Err(msg), Err("not reached".into())),
        Err((msg, false)) => (Err("stopped by criterion 9".into()), Err(msg)),
    }
}

fn free_action_obstruction() -> Outcome {
    for n in 1..=4 {
        let x = EquivariantObject::FinSet(GSet::swap_square(n));
        let check = x.is_free_action().map_err(err)?;
        let w = check.witness.ok_or(format!("|A|={n}: no witness"))?;
        ensure(!check.free, format!("|A|={n}: reported free"))?;
        ensure(w.element != x.group().identity(), format!("|A|={n}: the witness element is the identity"))?;
        ensure(w.point / n == w.point % n, format!("|A|={n}: the witness is off the diagonal"))?;
    }
    // d with two outputs, one to each of two normal vertices, no legs
    let g = Graph::new(
        vec![Vertex::new(vec![], vec![C, C]), Vertex::new(vec![C], vec![]), Vertex::new(vec![C], vec![])],
        vec![
            Edge::internal(C, Port::new(0, 0), Port::new(1, 0)),
            Edge::internal(C, Port::new(0, 1), Port::new(2, 0)),
        ],
        vec![],
        vec![],
    )
    .map_err(err)?;
    let m = MarkedGraph::new(g, vec![0]).map_err(err)?;
    ensure(is_reduced(&m.graph, &m.ds), "the example graph is not reduced")?;
    let aut = Arc::new(AutGroup::new(&m, 100).map_err(err)?);
    ensure(aut.order() == brute_automorphism_count(&m.graph, &m.ds), "automorphism count disagrees")?;
    ensure(aut.order() == 2, "the automorphism group is not of order two")?;
    for n in 1..=4 {
        let mut a = Collection::new();
        let names = (0..n).map(|i| format!("a{i}")).collect();
        a.insert(EntrySet::trivial(&pp(1, 0), names)).map_err(err)?;
        let d = decorate(&a, aut.clone()).map_err(err)?;
        ensure(d.set.size() == n * n, format!("|A|={n}: wrong decoration size"))?;
        let (g, x) = d.set.fixed_point_witness().ok_or(format!("|A|={n}: the decorations are free"))?;
        let t = d.tuple(x);
        ensure(g != d.set.group.identity() && t[0] == t[1], format!("|A|={n}: unexpected witness"))?;
    }
    Ok("swap action and decorated example are not free for |A| = 1..4".into())
}

fn initial_prop() -> Outcome {
    const COLORS: usize = 2;
    let mut entries = 0;
    for b in [Builtin::ConnectedWheelFree, Builtin::ConnectedWheeled] {
        let p0 = FreeProp::initial(PastingScheme::builtin(b), COLORS);
        for r in profile_orbits(COLORS, 4) {
            let unit = r.inputs.len() == 1 && r.outputs.len() == 1 && r.inputs == r.outputs;
            let expected = match (unit, r.arity() == 0 && b.wheeled()) {
                (true, _) => 1,
                (false, true) => COLORS,
                (false, false) => 0,
            };
            let size = p0.entry(&r).map_err(err)?.len();
            ensure(size == expected, format!("{b} at {r}: {size} elements, expected {expected}"))?;
            entries += 1;
        }
    }
    Ok(format!("{entries} entries over {COLORS} colors"))
}

fn main() {
    let t = Instant::now();
    let mut results: Vec<Line> = Vec::new();
    let single: [(u8, &str, u64, fn() -> Outcome); 7] = [
        (1, "walnut counterexample", 5, walnut_counterexample),
        (2, "five schemes are shrinkable", 120, five_schemes_shrinkable),
        (3, "substitution is associative and unital", 60, substitution_laws),
        (4, "reduction", 120, reduction),
        (5, "marked substitution keeps wellness", 30, marked_substitution),
        (6, "reduced enumeration vs oracle", 180, enumeration_vs_oracle),
        (7, "Q-construction sizes", 60, q_sizes),
    ];
    for (id, name, limit, f) in single {
        let start = Instant::now();
        let outcome = f();
        results.push((id, name, start.elapsed(), Duration::from_secs(limit), outcome));
    }
    let start = Instant::now();
    let (eight, nine) = filtration_vs_oracle();
    let elapsed = start.elapsed();
    results.push((8, "filtration vs pushout oracle", elapsed, Duration::from_secs(300), eight));
    results.push((9, "stage maps are injective", elapsed, Duration::from_secs(300), nine));
    for (id, name, limit, f) in [
        (10, "free-action obstruction", 5, free_action_obstruction as fn() -> Outcome),
        (11, "initial prop entries", 5, initial_prop),
    ] {
        let start = Instant::now();
        let outcome = f();
        results.push((id, name, start.elapsed(), Duration::from_secs(limit), outcome));
    }
    let mut failed = 0;
    for (id, name, elapsed, limit, outcome) in results {
        let in_time = elapsed <= limit;
        let pass = outcome.is_ok() && in_time;
        failed += usize::from(!pass);
        let detail = match (&outcome, in_time) {
            (Ok(d), true) => d.clone(),
            (Ok(d), false) => format!("over the time limit; {d}"),
            (Err(e), _) => e.clone(),
        };
        println!(
            "criterion {id:>2} {} {name:<40} {:>8.2}s / {:>3}s  {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
        );
    }
    println!("{} of 11 criteria pass in {:.1}s", 11 - failed, t.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
