mod common;

use std::process::Command;

use common::{assert_valid, cli, path_str};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xplain"))
}

#[test]
fn solve_prints_the_bug_answer_set() {
    let (code, out, _) = cli(&["solve", &path_str("bug.lp")]);
    assert_eq!(code, 0);
    assert_eq!(out, "{class(beetle), legs(6), eyes(2), wings(2)}\n");
}

#[test]
fn solve_without_answer_sets_exits_one() {
    let (code, out, _) = cli(&["solve", &path_str("inconsistent.lp")]);
    assert_eq!(code, 1);
    assert_eq!(out, "no answer sets\n");
    let (code, out, _) = cli(&["solve", &path_str("inconsistent.lp"), "--json"]);
    assert_eq!(code, 1);
    assert_eq!(out, "[]\n");
}

#[test]
fn solve_limit_is_a_prefix() {
    let dir = std::env::temp_dir().join(format!("xplain-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("choice.lp");
    std::fs::write(&file, "{a; b; c}.\n:- a, b.\n").unwrap();
    let file = file.to_str().unwrap();
    let (_, all, _) = cli(&["solve", file, "--json"]);
    let (_, two, _) = cli(&["solve", file, "--json", "--limit", "2"]);
    let all: Vec<Vec<String>> = serde_json::from_str(&all).unwrap();
    let two: Vec<Vec<String>> = serde_json::from_str(&two).unwrap();
    assert_eq!(all.len(), 6);
    assert_eq!(two, all[..2]);
    assert_valid("models", &serde_json::to_string(&all).unwrap());
}

#[test]
fn check_reports_membership_through_exit_code() {
    let bug = path_str("bug.lp");
    let (code, out, _) = cli(&["check", &bug, "--model", "class(beetle),legs(6),eyes(2),wings(2)"]);
    assert_eq!((code, out.as_str()), (0, "{class(beetle), legs(6), eyes(2), wings(2)} is an answer set\n"));
    let (code, out, _) = cli(&["check", &bug, "--model", "{legs(6), eyes(2), wings(2)}", "--json"]);
    assert_eq!(code, 1);
    assert_valid("check", &out);
}

#[test]
fn why_json_validates_and_has_three_fact_leaves() {
    let (code, out, _) = cli(&[
        "why",
        &path_str("bug.lp"),
        "--model",
        "class(beetle),legs(6),eyes(2),wings(2)",
        "--atom",
        "class(beetle)",
        "--json",
    ]);
    assert_eq!(code, 0);
    assert_valid("explain", &out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let graph = &v["graphs"][0];
    assert_valid("graph", &graph.to_string());
    let root = &graph["nodes"][graph["root"].as_u64().unwrap() as usize];
    assert_eq!(root["atom"], "class(beetle)");
    let children: Vec<&str> = graph["edges"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["from"] == graph["root"])
        .map(|e| graph["nodes"][e["to"].as_u64().unwrap() as usize]["atom"].as_str().unwrap())
        .collect();
    assert_eq!(children, ["legs(6)", "eyes(2)", "wings(2)"]);
    let facts = graph["nodes"].as_array().unwrap().iter().filter(|n| n["kind"] == "fact").count();
    assert!(facts >= 1);
    let fact_edges = graph["edges"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| graph["nodes"][e["to"].as_u64().unwrap() as usize]["kind"] == "fact")
        .count();
    assert_eq!(fact_edges, 3);
}

#[test]
fn whynot_explains_the_missing_class() {
    let (code, out, _) = cli(&["whynot", &path_str("bug.lp"), "--atom", "class(fly)"]);
    assert_eq!(code, 0);
    assert!(out.contains("class(fly) (out)"), "{out}");
    assert!(out.contains("eyes(5) is false"), "{out}");
    let (code, _, err) = cli(&["why", &path_str("bug.lp"), "--atom", "class(fly)"]);
    assert_eq!(code, 1);
    assert!(err.contains("class(fly)"), "{err}");
}

#[test]
fn why_on_unknown_atom_is_a_precondition_failure() {
    let (code, _, _) = cli(&["why", &path_str("bug.lp"), "--atom", "class(spider)"]);
    assert_eq!(code, 1);
    let (code, out, _) = cli(&["whynot", &path_str("bug.lp"), "--atom", "class(spider)", "--json"]);
    assert_eq!(code, 0);
    assert!(out.contains("no-rule"));
}

#[test]
fn dot_output_is_appended() {
    let (code, out, _) = cli(&["why", &path_str("bug.lp"), "--atom", "class(beetle)", "--dot"]);
    assert_eq!(code, 0);
    assert!(out.contains("digraph justification {"), "{out}");
}

#[test]
fn contrast_reproduces_the_bug_swap() {
    let (code, out, _) = cli(&[
        "contrast",
        &path_str("bug.lp"),
        "--space",
        &path_str("bug.space"),
        "--mode",
        "not-an-answer-set",
        "--target",
        "class(beetle)",
        "--json",
    ]);
    assert_eq!(code, 0);
    assert_valid("contrast", &out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let e = &v["explanations"][0];
    assert_eq!(e["new_facts"], serde_json::json!(["legs(6)", "eyes(5)", "wings(2)"]));
    assert_eq!(e["removed"], serde_json::json!(["eyes(2)"]));
    assert_eq!(e["added"], serde_json::json!(["eyes(5)"]));
    assert_eq!(e["distance"], 2);
}

#[test]
fn contrast_without_change_exits_one() {
    let (code, out, _) = cli(&[
        "contrast",
        &path_str("bug.lp"),
        "--space",
        &path_str("bug.space"),
        "--mode",
        "foil-becomes-brave",
        "--target",
        "class(spider)",
    ]);
    assert_eq!(code, 1);
    assert_eq!(out, "no minimal change found\n");
}

#[test]
fn abduce_lists_minimal_hypotheses() {
    let (code, out, _) = cli(&[
        "abduce",
        &path_str("bug.lp"),
        "--obs",
        "class(fly)",
        "--abducibles",
        "eyes(5),legs(6)",
        "--json",
    ]);
    assert_eq!(code, 0);
    assert_valid("abduce", &out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["hypotheses"], serde_json::json!([["eyes(5)"]]));
}

#[test]
fn mus_uses_soft_markers_or_predicates() {
    let (code, out, _) = cli(&["mus", &path_str("inconsistent.lp"), "--json"]);
    assert_eq!(code, 0);
    assert_valid("inconsistency", &out);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mus"], serde_json::json!([["sensor(c)"], ["sensor(a)", "sensor(b)"]]));
    assert_eq!(v["mcs"], serde_json::json!([["sensor(a)", "sensor(c)"], ["sensor(b)", "sensor(c)"]]));
    let (_, by_pred, _) = cli(&["mus", &path_str("inconsistent.lp"), "--soft", "sensor", "--json"]);
    assert_eq!(by_pred, out);
    let (_, first, _) = cli(&["mus", &path_str("inconsistent.lp"), "-k", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["mus"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let (code, _, _) = cli(&["solve"]);
    assert_eq!(code, 2);
    let (code, _, _) = cli(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, err) = cli(&["solve", "/nonexistent/file.lp"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));
    let (code, _, _) = cli(&["why", &path_str("bug.lp"), "--atom", "class(X"]);
    assert_eq!(code, 2);
    let (code, _, _) = cli(&[
        "contrast",
        &path_str("bug.lp"),
        "--space",
        &path_str("bug.space"),
        "--mode",
        "sideways",
        "--target",
        "a",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_carry_positions() {
    let dir = std::env::temp_dir().join(format!("xplain-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.lp");
    std::fs::write(&file, "a :- b.\nc :- d e.\n").unwrap();
    let (code, out, err) = cli(&["solve", file.to_str().unwrap(), "--json"]);
    assert_eq!(code, 2);
    assert!(err.contains("2:"), "{err}");
    assert_valid("error", &out);
}

#[test]
fn capacity_env_var_gives_exit_three() {
    let out = bin()
        .args(["solve", &path_str("bug.lp")])
        .env("XPLAIN_CAPACITY", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
    let out = bin()
        .args(["solve", &path_str("bug.lp")])
        .env("XPLAIN_CAPACITY", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_exit_codes_match_in_process_runs() {
    let out = bin().args(["solve", &path_str("bug.lp"), "--json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let (_, expected, _) = cli(&["solve", &path_str("bug.lp"), "--json"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
    let out = bin().args(["solve", &path_str("inconsistent.lp")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
