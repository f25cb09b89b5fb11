use assert_cmd::Command;
use serde_json::Value;
use std::fs;

fn lagbgg() -> Command {
    Command::cargo_bin("lagbgg").unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = lagbgg().args(args).assert().success().get_output().stdout.clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn verify_exit_codes() {
    lagbgg().args(["verify", "--suite", "serre-sl3", "--n", "1"]).assert().code(0);
    lagbgg().args(["verify", "--suite", "koszul", "--n", "3"]).assert().code(0);
    lagbgg().args(["verify", "--suite", "koszul", "--n", "99"]).assert().code(2);
    lagbgg().args(["verify", "--suite", "nope", "--n", "1"]).assert().code(2);
}

#[test]
fn verify_json_lists_checks() {
    let v = json_of(&["verify", "--suite", "weil", "--n", "1", "--format", "json"]);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(!v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn hexagon_table() {
    let v = json_of(&["table", "hexagon", "--n", "1", "--format", "json"]);
    assert_eq!(v["entries"].as_array().unwrap().len(), 7);
    let again = json_of(&["table", "hexagon", "--n", "1", "--format", "json"]);
    assert_eq!(v, again);
}

#[test]
fn dodecahedron_table() {
    let v = json_of(&["table", "dodecahedron", "--n", "1", "--format", "json"]);
    let centre = serde_json::json!({"index": [0, 0, 0], "dims": [2]});
    assert!(v["entries"].as_array().unwrap().contains(&centre));
}

#[test]
fn hodge_table() {
    let v = json_of(&["table", "hodge", "--n", "1", "--format", "json"]);
    let h11 = serde_json::json!({"index": [1, 1], "dims": [4]});
    assert!(v["entries"].as_array().unwrap().contains(&h11));
}

#[test]
fn table_csv_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hodge.csv");
    lagbgg().args(["table", "hodge", "--n", "1", "--format", "csv", "--output"]).arg(&path).assert().success();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("i,j,dim0\n"));
    assert!(text.contains("1,1,4\n"));
    lagbgg().args(["table", "hodge", "--n", "1", "--output", "/nonexistent/dir/x"]).assert().code(3);
}

#[test]
fn trivial_module_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("triv.json");
    let l = dir.path().join("l.json");
    fs::write(&input, r#"{"kind":"exterior","n":1,"pieces":[{"degree":[0,0],"dim":1}],"action":[[]]}"#).unwrap();
    lagbgg().args(["bgg", "--functor", "l", "--check-unit", "--input"]).arg(&input).arg("--output").arg(&l).assert().code(0);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&l).unwrap()).unwrap();
    assert_eq!(doc["kind"], "symmetric");
    let r = lagbgg().args(["bgg", "--functor", "r", "--input"]).arg(&l).assert().code(0).get_output().stdout.clone();
    let r: Value = serde_json::from_slice(&r).unwrap();
    assert_eq!(r["kind"], "exterior");
}

#[test]
fn window_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("triv.json");
    fs::write(&input, r#"{"kind":"exterior","n":1,"pieces":[{"degree":[0,0],"dim":1}],"action":[[]]}"#).unwrap();
    let out = lagbgg().env("LAGBGG_WINDOW", "0,0").args(["bgg", "--functor", "l", "--input"]).arg(&input).assert().code(0);
    let doc: Value = serde_json::from_slice(&out.get_output().stdout).unwrap();
    assert_eq!(doc["window"], serde_json::json!([0, 0]));
    // the flag wins over the environment
    let out = lagbgg().env("LAGBGG_WINDOW", "0,0").args(["bgg", "--functor", "l", "--window", "-1,1", "--input"]).arg(&input).assert().code(0);
    let doc: Value = serde_json::from_slice(&out.get_output().stdout).unwrap();
    assert_eq!(doc["window"], serde_json::json!([-1, 1]));
}

#[test]
fn rejects_bad_modules() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // b_1 b_2 + b_2 b_1 = 2 on the bottom piece
    fs::write(
        &bad,
        r#"{"kind":"exterior","n":2,"pieces":[{"degree":[0,0],"dim":1},{"degree":[0,1],"dim":2},{"degree":[0,2],"dim":1}],
"action":[[{"source":[0,0],"target":[0,1],"matrix":[["1"],["0"]]},{"source":[0,1],"target":[0,2],"matrix":[["0","1"]]}],
[{"source":[0,0],"target":[0,1],"matrix":[["0"],["1"]]},{"source":[0,1],"target":[0,2],"matrix":[["1","0"]]}]]}"#,
    )
    .unwrap();
    let out = lagbgg().args(["bgg", "--functor", "l", "--input"]).arg(&bad).assert().code(1);
    let err = String::from_utf8_lossy(&out.get_output().stderr).to_string();
    assert!(err.contains("(1, 2)"), "{err}");

    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{").unwrap();
    lagbgg().args(["bgg", "--functor", "l", "--input"]).arg(&garbage).assert().code(2);
}
