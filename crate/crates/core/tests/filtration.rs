//! Filtration stages against the brute-force pushout on the bundled
//! scenarios, plus the degenerate attachments whose answers are known.

use oracles::binary_tree_count;
use props_engine::budget::Budget;
use props_engine::prop::{filtration, pushout_oracle, Scenario};
use props_engine::{Color, ProfilePair};

fn scenario(name: &str) -> Scenario {
    let path = format!("{}/../../scenarios/{name}.json", env!("CARGO_MANIFEST_DIR"));
    Scenario::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn sizes(sc: &Scenario) -> Vec<(String, Vec<usize>, usize)> {
    let budget = Budget::default();
    sc.orbits
        .iter()
        .map(|(r, k)| {
            let run = sc.run_orbit(r, *k, &budget).unwrap();
            let c = &run.comparison;
            assert!(c.passed(), "{} at {:?}: {:?}", sc.json.name, r, c);
            assert!(c.abstract_iso);
            assert_eq!(c.next_stage_new, 0);
            (r.display(&sc.colors), c.stage_sizes.clone(), c.oracle_size)
        })
        .collect()
}

fn corolla_in(n: usize) -> ProfilePair {
    ProfilePair::new(vec![Color(0); n], vec![Color(0)])
}

#[test]
fn linear_category_pushout() {
    let sc = scenario("unital-linear-category");
    let got: Vec<(String, usize)> = sizes(&sc).into_iter().map(|(r, _, n)| (r, n)).collect();
    let expected = [
        ("(p;r)", 2),
        ("(q;r)", 2),
        ("(p;q)", 1),
        ("(p;p)", 1),
        ("(q;q)", 1),
        ("(r;r)", 1),
        ("(r;p)", 0),
        ("(q;p)", 0),
    ];
    assert_eq!(got, expected.map(|(r, n)| (r.to_string(), n)));
}

#[test]
fn binary_trees_pushout_counts_two_generators() {
    let sc = scenario("unital-trees-binary");
    for (n, (_, stages, oracle)) in (1..).zip(sizes(&sc)) {
        assert_eq!(oracle as u128, binary_tree_count(n, 2));
        assert_eq!(stages[0] as u128, binary_tree_count(n, 1));
    }
}

#[test]
fn unit_maps_are_coherent() {
    let sc = scenario("unital-linear-category");
    let u = sc.unit_maps(&Budget::default()).unwrap();
    assert!(u.is_corolla.iter().all(|&b| b));
    assert!(u.coherent.iter().all(|&b| b));
}

#[test]
fn stage_zero_is_the_original_entry() {
    let sc = scenario("unital-trees-binary");
    for n in 1..=4 {
        let r = corolla_in(n);
        let f = filtration(&sc.problem, &r, 0, &Budget::default()).unwrap();
        assert_eq!(f.stages.len(), 1);
        assert_eq!(f.top().size(), sc.problem.a.entry(&r).unwrap().len());
    }
}

/// Attaching along a bijection changes nothing.
#[test]
fn identity_attachment_gives_back_the_prop() {
    let text = std::fs::read_to_string(format!(
        "{}/../../scenarios/unital-trees-binary.json",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["attach"]["x"] = serde_json::json!(["x"]);
    json["attach"]["y"] = serde_json::json!(["x'"]);
    json["attach"]["i"] = serde_json::json!({ "x": "x'" });
    json["attach"]["f"] = serde_json::json!({ "x": { "generator": "mu" } });
    let sc = Scenario::parse(&json.to_string()).unwrap();
    let budget = Budget::default();
    for n in 1..=3 {
        let run = sc.run_orbit(&corolla_in(n), 2, &budget).unwrap();
        assert!(run.comparison.passed());
        let a = binary_tree_count(n, 1) as usize;
        assert_eq!(run.comparison.oracle_size, a);
        assert!(run.comparison.stage_sizes.iter().all(|&s| s == a));
    }
}

#[test]
fn widening_the_oracle_window_changes_nothing() {
    let sc = scenario("unital-trees-binary");
    let budget = Budget::default();
    let r = corolla_in(3);
    let small = pushout_oracle(&sc.problem, &r, 2, &budget).unwrap();
    let large = pushout_oracle(&sc.problem, &r, 4, &budget).unwrap();
    assert_eq!(small.size(), large.size());
    for (key, &c) in &small.class_of {
        let image = large.class_of[key];
        let rep = &small.reps[c];
        assert_eq!(large.class_of[&sc.problem.key(rep)], image);
    }
}
