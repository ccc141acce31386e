use std::path::PathBuf;
use std::process::Command;

use basisdiv_cli::format::{parse_algebra_file, parse_algebra_str, to_json};
use basisdiv_cli::main_with_args;
use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "corpus",
        &format!("{name}.alg.json"),
    ]
    .iter()
    .collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["basisdiv".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    let (code, out, err) = main_with_args(&full);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    (code, serde_json::from_str(&out).unwrap())
}

const CORPUS: [&str; 7] = ["ex1", "d2", "w", "zero", "sl2-Q", "sl2-F5", "m2-F2"];

#[test]
fn corpus_round_trips() {
    for name in CORPUS {
        let a = parse_algebra_file(corpus(name).as_ref()).unwrap();
        let text = to_json(&a);
        let b = parse_algebra_str(&text).unwrap();
        assert_eq!(a, b, "{name}");
        assert_eq!(text, to_json(&b), "{name}");
    }
}

/// Replaces `@name` arguments with the corpus path.
fn expand(args: &[&str]) -> Vec<String> {
    args.iter()
        .map(|a| match a.strip_prefix('@') {
            Some(name) => corpus(name),
            None => a.to_string(),
        })
        .collect()
}

fn run_expanded(args: &[&str]) -> (i32, String, String) {
    let owned = expand(args);
    run(&owned.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn exit_codes_match_verdicts_on_the_corpus() {
    let cases: &[(&[&str], i32)] = &[
        (&["--reduce-mod", "2", "check-semisimple", "@ex1", "--all-bases"], 1),
        (&["check-semisimple", "@ex1"], 2),
        (&["ann", "@ex1"], 0),
        (&["check-semisimple", "@d2"], 0),
        (&["check-simple", "@d2"], 2),
        (&["check-simple", "@d2", "--all-bases"], 1),
        (&["check-semisimple", "@zero"], 1),
        (&["check-simple", "@zero"], 1),
        (&["check-simple", "@sl2-F5"], 0),
        (&["check-simple", "@sl2-Q"], 2),
        (&["check-semisimple", "@m2-F2"], 0),
        (&["classify-basis", "@w"], 1),
        (&["classify-basis", "@m2-F2"], 0),
        (&["classify-basis", "@sl2-Q"], 2),
        (&["oracle", "@d2", "--semisimple"], 0),
        (&["oracle", "@d2", "--simple"], 1),
        (&["oracle", "@d2"], 0),
        (&["decompose", "@zero"], 0),
        (&["check-semisimple", "@sl2-Q", "--all-bases"], 3),
        (&["classify-basis", "@sl2-Q", "--mode", "exhaustive"], 3),
    ];
    for (args, expected) in cases {
        let (code, out, err) = run_expanded(args);
        assert_eq!(code, *expected, "{args:?}\n{out}{err}");
    }
}

#[test]
fn check_semisimple_reason_on_ex1_mod_2() {
    let (code, v) = run_json(&["--reduce-mod", "2", "check-semisimple", &corpus("ex1"), "--all-bases"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["reason_text"], "no semi-division basis");
    assert_eq!(v["result"]["verdict"], "not semisimple");
}

#[test]
fn failing_verdicts_carry_replayable_witnesses() {
    let (_, v) = run_json(&["classify-basis", &corpus("w")]);
    let weak = &v["result"]["weak_division"];
    assert_eq!(weak["status"], "fails");
    let w = &weak["witness"];
    assert_eq!(w["index"], "u");
    assert_eq!(w["element"]["expr"], "v");
    assert_eq!(w["product"]["expr"], "v");
    assert_eq!(w["missing"], "partner");
    assert_eq!(w["replays"], true);
    assert_eq!(v["result"]["i_division"]["witness"]["replays"], true);
    let (_, v) = run_json(&["classify-basis", &corpus("m2-F2")]);
    assert!(v["result"]["weak_division"]["witness"].is_null());
}

#[test]
fn reports_are_byte_stable() {
    let cases: [&[&str]; 3] = [
        &["--format", "json", "decompose", "@sl2-F5"],
        &["--format", "json", "classify-basis", "@ex1"],
        &["check-semisimple", "@d2", "--all-bases"],
    ];
    for args in cases {
        assert_eq!(run_expanded(args), run_expanded(args));
    }
}

#[test]
fn decompose_zero_gives_singletons_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("z.dot");
    let (code, v) = run_json(&["decompose", &corpus("zero"), "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    let blocks = v["result"]["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0]["indices"], serde_json::json!(["e1"]));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.contains("cluster_block1"));
}

#[test]
fn sl2_over_q_is_one_block() {
    let (code, v) = run_json(&["decompose", &corpus("sl2-Q")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["blocks"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["direct_sum"], true);
}

#[test]
fn ideal_command_parses_expressions() {
    let (code, v) = run_json(&["ideal", &corpus("ex1"), "b1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["ideal"]["rank"], 1);
    let (_, v) = run_json(&["ideal", &corpus("sl2-Q"), "e + 1/2*h"]);
    assert_eq!(v["result"]["is_full"], true);
    let (code, _, err) = run(&["ideal", &corpus("ex1"), "b7"]);
    assert_eq!(code, 3);
    assert!(err.contains("unknown label 'b7'"), "{err}");
}

#[test]
fn fuzz_summary_lists_seeds() {
    let (code, v) = run_json(&["fuzz", "--field", "F_3", "--dim", "2", "--trials", "6", "--seed", "40"]);
    assert_eq!(code, 0);
    let seeds: Vec<u64> = v["result"]["trials"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["seed"].as_u64().unwrap())
        .collect();
    assert_eq!(seeds, (40..46).collect::<Vec<_>>());
    assert!(v["result"]["counterexamples"].as_array().unwrap().is_empty());
    let (seq, _) = run_json(&[
        "fuzz",
        "--field",
        "3",
        "--dim",
        "2",
        "--trials",
        "6",
        "--seed",
        "40",
        "--sequential",
    ]);
    assert_eq!(seq, 0);
    let (code, _, _) = run(&["fuzz", "--field", "Q", "--dim", "2", "--trials", "1", "--seed", "0"]);
    assert_eq!(code, 3);
}

#[test]
fn malformed_inputs_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"field":{"type":"Q"},"dim":2,"basis":["a","a"],"products":[]}"#, "a"),
        (
            r#"{"field":{"type":"Q"},"dim":1,"basis":["a"],"products":[{"left":"a","right":"a","result":{"a":"1/0"}}]}"#,
            "products[0].result.a",
        ),
        ("{\"field\": {\"type\":\"Q\"},\n \"dim\": }", "line 2"),
    ];
    for (k, (body, needle)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{k}.alg.json"));
        std::fs::write(&path, body).unwrap();
        let (code, _, err) = run(&["info", path.to_str().unwrap()]);
        assert_eq!(code, 3);
        assert!(err.contains(needle), "{err}");
    }
    let (code, v) = run_json(&["info", "/nonexistent.alg.json"]);
    assert_eq!(code, 3);
    assert!(v["result"]["error"].as_str().unwrap().contains("cannot read"));
    assert_eq!(run(&["frobnicate"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn binary_exit_code() {
    let status = Command::new(env!("CARGO_BIN_EXE_basisdiv"))
        .args(["--reduce-mod", "2", "check-semisimple", "--all-bases", &corpus("ex1")])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&status.stdout).contains("no semi-division basis"));
}
