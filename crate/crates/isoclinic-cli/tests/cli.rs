use serde_json::{json, Value};
use std::process::{Command, Output};

fn run(args: &[&str], input: &Value) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoclinic"))
        .args(args)
        .arg("--input")
        .arg(input.to_string())
        .env_remove("ISOCLINIC_FIELD")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], input: &Value) -> Value {
    let out = run(args, input);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn oper_slope_example() {
    let v = ok(&["oper", "slope"], &json!({ "algebra": "A1", "coefficients": [[1, 2, "1"]] }));
    assert_eq!(v, json!({ "slope": "1/2" }));
}

#[test]
fn dim_match_table_passes() {
    let v = ok(&["verify", "dim-match"], &json!({ "algebra": "A2", "m": 3, "N": 4 }));
    assert_eq!(v["pass"], json!(true));
    let counts: Vec<i64> = v["rows"].as_array().unwrap().iter().map(|r| r["count"].as_i64().unwrap()).collect();
    assert_eq!(counts, vec![0, 1, 1]);
}

#[test]
fn malformed_json_is_a_schema_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_isoclinic"))
        .args(["oper", "slope", "--input", "{\"algebra\": \"A1\",\n  \"coefficients\": [1,"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "schema");
    assert!(v["error"]["message"].as_str().unwrap().contains("line 2 column"));
}

#[test]
fn missing_field_is_a_schema_error() {
    let out = run(&["verify", "dim-match"], &json!({ "algebra": "A2", "m": 3 }));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let out = run(&["airy", "gen"], &json!({ "algebra": "A1", "top": "0" }));
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "domain");
}

#[test]
fn exact_output_is_byte_stable() {
    let input = json!({ "algebra": "A2", "coefficients": [[2, 6, "1"], [1, 3, "2"], [2, 5, "-3"]] });
    let a = run(&["oper", "reduce"], &input);
    let b = run(&["oper", "reduce"], &input);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reduce_then_invert_recovers_the_oper() {
    let oper = json!({ "algebra": "A2", "coefficients": [[1, 3, "2"], [2, 5, "-3"], [2, 6, "1"]] });
    let reduced = ok(&["oper", "reduce"], &oper);
    let back = ok(&["oper", "invert"], &json!({ "canonical": reduced["canonical"] }));
    assert_eq!(back["oper"], oper);
    let minimal = ok(&["oper", "minimal"], &json!({ "algebra": "A2", "N": 4, "m": 3, "leading": [[2, 6, "1"]], "lower": [[1, 3, "2"], [2, 5, "-3"]] }));
    assert_eq!(minimal["oper"], oper);
}

#[test]
fn airy_output_feeds_the_infinity_check() {
    let gen = ok(&["airy", "gen"], &json!({ "algebra": "A2", "lower": [[1, "5"]] }));
    assert_eq!(gen["at_zero"]["slopes"][0], "4/3");
    let inf = ok(&["airy", "infinity"], &gen);
    assert_eq!(inf["trivial_monodromy"], json!(true));
}

#[test]
fn langlands_and_fibers_on_sl2() {
    let input = json!({ "algebra": "A1", "m": 2, "N": 3, "character": { "-3": ["1", "0", "1"], "-1": ["2", "0", "2"] } });
    let p = ok(&["langlands", "param"], &input);
    assert_eq!(p["slope"], "3/2");
    assert_eq!(p["isoclinic"], json!(true));
    let f = ok(&["hitchin", "fibers"], &input);
    assert_eq!(f["w0_order"], json!(2));
    assert_eq!(f["fiber_is_orbit"], json!(true));
}

#[test]
fn hitchin_map_against_dt() {
    let form = json!({ "ramification": 1, "terms": [[-3, ["0", "0", "1"]], [0, ["1", "0", "0"]]] });
    let v = ok(&["hitchin", "map"], &json!({ "algebra": "A1", "form": form, "against": "dt" }));
    assert_eq!(v["components"][0]["terms"], json!([[-3, "1"]]));
}

#[test]
fn field_mode_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_isoclinic"))
        .args(["oper", "reduce", "--input", r#"{"algebra":"A1","coefficients":[[1,4,"1"]]}"#])
        .env("ISOCLINIC_FIELD", "float")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["canonical"]["coefficients"][0][0].is_array());
}

#[test]
fn ktype_build_and_special() {
    let b = ok(&["ktype", "build"], &json!({ "algebra": "A2", "m": 3, "N": 4 }));
    assert!(b["report"].as_object().unwrap().values().all(|x| x == &json!(true)));
    let s = ok(&["ktype", "special"], &json!({ "algebra": "A1", "m": 2, "N": 3, "character": { "-3": ["1", "0", "1"] } }));
    assert_eq!(s["special"], s["relevant"]);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("isoclinic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("info.json");
    let out = Command::new(env!("CARGO_BIN_EXE_isoclinic"))
        .args(["algebra", "info", "--input", r#"{"algebra":"B2"}"#, "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["dual"], "C2");
    std::fs::remove_dir_all(&dir).unwrap();
}
