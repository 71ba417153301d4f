use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

use oracles::brute_weak_iso;
use props_engine::graph::GraphJson;

fn props(args: &[&str], input: &str, env: &[(&str, &str)]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_props"))
        .args(args)
        .env_remove("PROPS_ENGINE_BUDGET")
        .envs(env.iter().copied())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the props binary starts");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scenario(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn walnut() -> Value {
    json!({
        "colors": ["c"],
        "vertices": [{"in": [], "out": [0, 0]}, {"in": [0, 0], "out": []}],
        "edges": [
            {"kind": "internal", "color": 0, "src": [0, 0], "tgt": [1, 0]},
            {"kind": "internal", "color": 0, "src": [0, 1], "tgt": [1, 1]}
        ],
        "in_listing": [],
        "out_listing": []
    })
}

fn graph_of(v: &Value) -> props_engine::Graph {
    let j: GraphJson = serde_json::from_value(v.clone()).unwrap();
    j.to_graph().unwrap().1
}

#[test]
fn check_shrink_reports_the_walnut() {
    let o = props(&["scheme", "check-shrink", "--scheme", "wheel-free", "--max-vertices", "3"], "", &[]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["status"], "fail");
    assert!(brute_weak_iso(&graph_of(&v["witness"]), &[], &graph_of(&walnut()), &[]));
}

#[test]
fn shrinkable_scheme_passes() {
    let o = props(&["scheme", "check-shrink", "--scheme", "unital-trees"], "", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["status"], "pass");
}

#[test]
fn shrinking_a_walnut_edge_gives_a_loop() {
    let o = props(&["ops", "shrink", "--edge", "0"], &walnut().to_string(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let g = graph_of(&stdout_json(&o));
    assert_eq!(g.num_vertices(), 1);
    assert_eq!(g.num_edges(), 1);
    assert!(g.edge(0).is_loop());
}

#[test]
fn dot_output() {
    let o = props(&["--format", "dot", "ops", "shrink", "--edge", "1"], &walnut().to_string(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn malformed_json_reports_its_position() {
    let o = props(&["graph", "validate"], "{\n  \"colors\": [\"c\",\n", &[]);
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "format");
    assert_eq!(err["line"], 3);
    assert!(err["column"].is_number());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(props(&["graph", "frobnicate"], "", &[]).status.code(), Some(2));
    assert_eq!(props(&["scheme", "member", "--scheme", "no-such-scheme"], "{}", &[]).status.code(), Some(2));
    assert_eq!(props(&["--help"], "", &[]).status.code(), Some(0));
}

#[test]
fn invalid_graph_fails_validation() {
    let mut g = walnut();
    g["edges"][1]["tgt"] = json!([1, 0]);
    let o = props(&["graph", "validate"], &g.to_string(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["valid"], false);
}

#[test]
fn output_is_identical_across_runs_and_workers() {
    let marked = json!({ "graph": chain(5), "ds": [2] }).to_string();
    let args = ["--seed", "9", "marked", "reduce", "--scheme", "unital-linear", "--orders", "6"];
    let one = props(&args, &marked, &[]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout_json(&one)["order_independent"], true);
    let again = props(&args, &marked, &[]);
    let mut wide = vec!["--jobs", "4"];
    wide.extend(args);
    let parallel = props(&wide, &marked, &[]);
    assert_eq!(one.stdout, again.stdout);
    assert_eq!(one.stdout, parallel.stdout);

    let enumerate = ["marked", "enumerate", "--scheme", "unital-trees", "--r", "c,c,c;c", "--s", "c,c;c", "--k", "2"];
    let a = props(&[&["--jobs", "1"], &enumerate[..]].concat(), "", &[]);
    let b = props(&[&["--jobs", "3"], &enumerate[..]].concat(), "", &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout_json(&a)["count"], 33);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn budget_variable_caps_enumeration() {
    let args = ["scheme", "check-shrink", "--scheme", "connected-wheeled"];
    let o = props(&args, "", &[("PROPS_ENGINE_BUDGET", "10")]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["status"], "partial");
}

#[test]
fn scenario_comparison_passes() {
    let path = scenario("unital-trees-binary.json");
    let o = props(&["--in", &path, "prop", "compare", "--rmax", "3", "--kmax", "2"], "", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["passed"], true);
}

#[test]
fn q_sizes_on_the_command_line() {
    let o = props(&["equi", "q"], r#"{"x": 1, "y": 2, "i": [0], "t": 3}"#, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["sizes"], json!([1, 4, 7, 8]));
}

#[test]
fn free_check_gives_a_witness() {
    let input = json!({
        "kind": "finset",
        "elements": ["00", "01", "10", "11"],
        "group": {"symmetric": 2},
        "action": [[0, 1, 2, 3], [0, 2, 1, 3]]
    });
    let o = props(&["equi", "freecheck"], &input.to_string(), &[]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["free"], false);
}

/// `n` unary vertices in a row, as graph JSON.
fn chain(n: usize) -> Value {
    let mut edges = vec![json!({"kind": "in_leg", "color": 0, "tgt": [0, 0]})];
    for v in 1..n {
        edges.push(json!({"kind": "internal", "color": 0, "src": [v - 1, 0], "tgt": [v, 0]}));
    }
    edges.push(json!({"kind": "out_leg", "color": 0, "src": [n - 1, 0]}));
    json!({
        "colors": ["c"],
        "vertices": vec![json!({"in": [0], "out": [0]}); n],
        "edges": edges,
        "in_listing": [0],
        "out_listing": [n],
    })
}
