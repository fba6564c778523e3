use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagtope")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.trim().lines().count(), 1, "{text}");
    serde_json::from_str(text.trim()).expect("stderr is JSON")
}

#[test]
fn dependent_points_exit_one_with_witness() {
    let out = run(&["matroid", "independent", "--n", "4", "--d", "3", "--points", "[[3,0,0],[2,1,0],[1,2,0],[1,1,1]]"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "dependent");
    assert_eq!(v["witness"]["size"], 2);
    assert_eq!(v["witness"]["anchor"], serde_json::json!([1, 1, 0]));
}

#[test]
fn point_set_objects_and_rank() {
    let out = run(&["matroid", "rank", "--points", r#"{"n":3,"d":3,"points":[[2,0,0],[1,1,0],[1,0,1]]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rank"], 2);
    let out = run(&["matroid", "rank", "--points", "[[2,0,0]]"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["kind"], "usage");
}

#[test]
fn bases_serial_and_parallel_agree() {
    let a = run(&["matroid", "bases", "--n", "3", "--d", "3"]);
    let b = run(&["matroid", "bases", "--n", "3", "--d", "3", "--parallel", "3"]);
    assert_eq!(json(&a)["count"], 17);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["matroid", "bases", "--n", "5", "--d", "3", "--budget", "10"]);
    assert_eq!(c.status.code(), Some(3));
    assert_eq!(stderr_json(&c)["kind"], "budget_exceeded");
}

#[test]
fn empty_tiling_for_n1() {
    let out = run(&["tile", "solve", "--n", "1", "--holes", "[[0,0,0]]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tiles"], serde_json::json!([]));
}

#[test]
fn tiling_verdicts() {
    let bad = run(&["tile", "check", "--n", "3", "--holes", "[[2,0,0],[1,1,0],[1,0,1]]"]);
    assert_eq!(bad.status.code(), Some(1));
    let slide = run(&["tile", "slide", "--n", "3", "--holes", "[[2,0,0],[1,1,0],[1,0,1]]"]);
    assert_eq!(slide.status.code(), Some(1));
    assert!(json(&slide)["witness"].is_object());
    let solved = run(&["tile", "solve", "--n", "3", "--holes", "[[2,0,0],[0,2,0],[0,0,2]]"]);
    assert_eq!(solved.status.code(), Some(0));
    let tiling = String::from_utf8(solved.stdout).unwrap();
    let svg = run(&["tile", "render", "--tiling", tiling.trim(), "--format", "svg"]);
    assert!(String::from_utf8_lossy(&svg.stdout).starts_with("<svg"));
}

#[test]
fn svg_written_to_file() {
    let path = std::env::temp_dir().join(format!("flagtope-{}.svg", std::process::id()));
    let out = run(&[
        "tile", "render", "--n", "2", "--holes", "[[1,0,0],[0,1,0]]", "--format", "svg", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&path).unwrap().contains("hole"));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn schubert_vanishing_fixture() {
    let out = run(&["schubert", "vanishing", "--floors", &fixture("c213.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "VANISHES");
    assert_eq!(v["k"], 2);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(r#"{"verdict":"VANISHES","k":2"#));
    let boards = run(&["schubert", "vanishing", "--floors", &fixture("s6_boards.txt")]);
    assert_eq!(json(&boards)["verdict"], "INCONCLUSIVE");
}

#[test]
fn schubert_parse_and_rank_array() {
    let out = run(&["schubert", "parse", "--floors", &fixture("c213_boards.txt")]);
    let from_json = std::fs::read_to_string(fixture("c213.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), from_json);
    let boards = run(&["schubert", "parse", "--floors", &fixture("c213.json"), "--format", "ascii"]);
    assert_eq!(String::from_utf8(boards.stdout).unwrap(), std::fs::read_to_string(fixture("c213_boards.txt")).unwrap());
    let r = run(&["schubert", "rank-array", "--w", "53124"]);
    assert_eq!(json(&r)["table"][3], serde_json::json!([1, 2, 3, 4, 4]));
    let bad = run(&["schubert", "rank-array", "--w", "5312"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn triangulation_commands() {
    let ok = run(&["triangulate", "verify", "--trees", &fixture("prism_triangulation.json")]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["triangulate", "verify", "--trees", r#"{"n":2,"d":3,"trees":[[[1,1],[1,2],[1,3],[2,2]]]}"#]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["violation"]["condition"], "missing_neighbour");
    let pure = run(&["triangulate", "pure", "--trees", &fixture("prism_triangulation.json")]);
    assert_eq!(json(&pure)["is_basis"], true);
    let reg = run(&["triangulate", "regular", "--n", "2", "--d", "2", "--weights", r#"{"n":2,"d":2,"w":[["0","0"],["0","1"]]}"#]);
    assert_eq!(json(&reg)["triangulation"]["trees"], serde_json::json!([[[1, 1], [1, 2], [2, 2]], [[1, 1], [2, 1], [2, 2]]]));
    let flat = run(&["triangulate", "regular", "--n", "2", "--d", "2", "--weights", r#"{"n":2,"d":2,"w":[["0","0"],["0","0"]]}"#]);
    assert_eq!(flat.status.code(), Some(2));
    assert_eq!(stderr_json(&flat)["kind"], "non_generic_weights");
}

#[test]
fn survey_always_exits_zero_and_ignores_thread_count() {
    let a = run(&["triangulate", "survey", "--n", "2", "--d", "3", "--seed", "3", "--samples", "300"]);
    let b = run(&["triangulate", "survey", "--n", "2", "--d", "3", "--seed", "3", "--samples", "300", "--parallel", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["total_bases"], 3);
}

#[test]
fn randomized_commands_require_seed() {
    for args in [
        &["flags", "random", "--n", "3", "--d", "3"][..],
        &["represent", "matrix", "--n", "3"][..],
        &["triangulate", "regular", "--n", "2", "--d", "3"][..],
        &["triangulate", "survey", "--n", "2", "--d", "3"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_json(&out)["kind"], "usage");
    }
}

#[test]
fn flag_pipeline_round_trips_and_is_deterministic() {
    let a = run(&["flags", "random", "--n", "3", "--d", "3", "--seed", "11"]);
    let b = run(&["flags", "random", "--n", "3", "--d", "3", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let family = String::from_utf8(a.stdout).unwrap();
    let check = run(&["flags", "check", "--flags", family.trim()]);
    assert_eq!(check.status.code(), Some(0));
    assert_eq!(json(&check)["generic"], true);
    let rebuilt = run(&["flags", "reconstruct", "--flags", family.trim()]);
    assert_eq!(json(&rebuilt)["round_trip"], true);
    let lines = json(&rebuilt)["lines"].to_string();
    let from_lines = run(&["flags", "reconstruct", "--lines", &lines]);
    assert_eq!(json(&from_lines)["flags"], json(&rebuilt)["flags"]);
    let h = run(&["flags", "hyperplanes", "--n", "3", "--m", "4", "--seed", "2"]);
    assert_eq!(json(&h)["comparison"]["equal"], true);
}

#[test]
fn represent_commands() {
    let sym = run(&["represent", "matrix", "--n", "3", "--symbolic"]);
    assert_eq!(json(&sym)["columns"][5]["vector"], serde_json::json!(["ac", "ad+be", "bf"]));
    let big = run(&["represent", "matrix", "--n", "6", "--symbolic"]);
    assert_eq!(stderr_json(&big)["kind"], "symbolic_too_large");
    let dep = run(&["represent", "independent", "--n", "3", "--d", "3", "--points", "[[2,0,0],[1,1,0],[1,0,1]]", "--seed", "1"]);
    assert_eq!(dep.status.code(), Some(1));
    assert_eq!(json(&dep)["routing"], Value::Null);
    let m = run(&["represent", "matrix", "--n", "3", "--seed", "4"]);
    let matrix = &json(&m)["matrix"];
    assert_eq!((matrix["rows"].as_u64(), matrix["cols"].as_u64()), (Some(3), Some(6)));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = run(&["matroid", "rank", "--points", "[]", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["kind"], "usage");
    let missing = run(&["schubert", "vanishing", "--floors", "/nonexistent/floors.json"]);
    assert_eq!(missing.status.code(), Some(2));
}
