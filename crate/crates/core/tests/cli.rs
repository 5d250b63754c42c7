use std::process::Command;

use serde_json::Value;

fn detmld(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_detmld"))
        .args(args)
        .env_remove("DETMLD_THREADS")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = detmld(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn mld_point_and_locus() {
    let v = json(&["mld", "point", "--m", "3", "--k", "2", "--alphas", "0,0", "--q", "0"]);
    assert_eq!(v["mld"], "6");
    assert_eq!(v["lc"], true);
    assert_eq!(v["beta"], serde_json::json!(["2", "4"]));
    let v = json(&["mld", "locus", "--m", "5", "--k", "2", "--alphas", "0,0", "--j", "1"]);
    assert_eq!(v["mld"], "4");
    assert_eq!(v["terminal"], true);
    let v = json(&["mld", "point", "--m", "3", "--k", "2", "--alphas", "3,0", "--q", "0"]);
    assert_eq!(v["mld"], "-inf");
    assert_eq!(v["violation"]["j"], 1);
}

#[test]
fn oracle_flag() {
    let v = json(&["mld", "point", "--m", "4", "--k", "3", "--alphas", "1/2,1,0", "--q", "1", "--oracle", "2"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["oracle"]["minimum"], v["mld"]);
    let v = json(&["mld", "point", "--m", "3", "--k", "2", "--alphas", "1,7/2", "--q", "0", "--oracle", "6"]);
    assert_eq!(v["agree"], false);
}

#[test]
fn lc_check() {
    let v = json(&["lc", "check", "--m", "3", "--k", "2", "--alphas", "1,7/2", "--q", "0"]);
    assert_eq!(v["lc"], false);
    assert_eq!(v["violation"]["j"], 2);
    assert_eq!(v["violation"]["alpha_sum"], "9/2");
    assert_eq!(v["violation"]["bound"], "4");
    let v = json(&["lc", "check", "--m", "3", "--k", "2", "--alphas", "1,1", "--j", "2"]);
    assert_eq!(v["lc"], true);
    assert!(v["violation"].is_null());
}

#[test]
fn orbit_codim() {
    let v = json(&["orbit", "codim", "--m", "3", "--k", "2", "--lambda", "inf,2,1"]);
    assert_eq!((v["codim"].as_u64(), v["nash"].as_u64()), (Some(11), Some(3)));
    assert_eq!(v["w"], serde_json::json!([3, 1]));
    let v = json(&["orbit", "codim", "--m", "5", "--k", "3", "--lambda", "inf,inf,1,0,0", "--q", "2"]);
    assert_eq!(v["codim_point"], 21);
    assert_eq!(detmld(&["orbit", "codim", "--m", "3", "--k", "2", "--lambda", "1,2,3"]).0, 2);
    assert_eq!(detmld(&["orbit", "codim", "--m", "3", "--k", "2", "--lambda", "2,2,1"]).0, 1);
}

#[test]
fn ord_oracle() {
    let v = json(&["ord", "--lambda", "3,2,1", "--m", "3", "--s", "2", "--N", "6"]);
    assert_eq!(v["order"], serde_json::json!({"finite": 3}));
    assert_eq!(v["closed_form"], 3);
    let v = json(&["ord", "--lambda", "3,2,1", "--m", "3", "--s", "3", "--N", "6", "--seed", "7"]);
    assert_eq!(v["order"], serde_json::json!({"finite": 6}));
    assert_eq!(detmld(&["ord", "--lambda", "3,2,1", "--m", "3", "--s", "2", "--N", "2"]).0, 1);
}

#[test]
fn straighten_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dt.json");
    std::fs::write(&path, r#"{"left":{"shape":[1,1],"rows":[[1],[2]]},"right":{"shape":[1,1],"rows":[[2],[1]]}}"#).unwrap();
    let file = path.to_str().unwrap();
    let v = json(&["straighten", "--file", file]);
    let terms = v["expansion"]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(v["m"], 2);
    let v = json(&["straighten", "--file", file, "--kbound", "1"]);
    assert_eq!(v["expansion"]["terms"].as_array().unwrap().len(), 1);
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(detmld(&["straighten", "--file", file]).0, 2);
    assert_eq!(detmld(&["straighten", "--file", "/nonexistent/dt.json"]).0, 2);
}

#[test]
fn nash_verify() {
    let v = json(&["nash", "verify", "--m", "2", "--k", "1"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["f_span_dimension"], 4);
    assert!(v.get("elapsed_ms").is_none());
    let v = json(&["nash", "verify", "--m", "2", "--k", "2", "--timing"]);
    assert!(v["elapsed_ms"].is_u64());
    let (code, _, err) = detmld(&["nash", "verify", "--m", "4", "--k", "1"]);
    assert_eq!(code, 1);
    assert!(err.contains("m ≤ 3"));
}

#[test]
fn semicontinuity() {
    let v = json(&["semicontinuity", "--m", "3", "--k", "2", "--alphas", "1,1"]);
    assert_eq!(v["values"], serde_json::json!(["3", "6", "8"]));
    assert_eq!(v["strictly_increasing"], true);
}

#[test]
fn argument_errors_exit_2() {
    let (code, out, err) = detmld(&["mld", "point", "--m", "3"]);
    assert_eq!(code, 2);
    assert!(out.is_empty() && !err.is_empty());
    assert_eq!(detmld(&["frobnicate"]).0, 2);
    assert_eq!(detmld(&["mld", "point", "--m", "3", "--k", "2", "--q", "0", "--alphas", "1/0"]).0, 2);
}

#[test]
fn environment_threads_do_not_change_values() {
    let args = ["nash", "verify", "--m", "3", "--k", "2"];
    let plain = detmld(&args).1;
    let out = Command::new(env!("CARGO_BIN_EXE_detmld")).args(args).env("DETMLD_THREADS", "1").output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), plain);
}

#[test]
fn rationals_are_strings() {
    let v = json(&["mld", "point", "--m", "4", "--k", "2", "--alphas", "0.25,1/3", "--q", "0"]);
    assert_eq!(v["mld"], "43/6");
    assert!(v["alphas"].as_array().unwrap().iter().all(Value::is_string));
    assert!(v["beta"].as_array().unwrap().iter().all(Value::is_string));
}
