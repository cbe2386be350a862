use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hankelfrac")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn stern_table_starts_with_known_values() {
    let v = json(&["hankel", "table", "--seq", "stern_S", "--n", "16", "--json"]);
    assert_eq!(v["table"][1], "1");
    assert_eq!(v["table"][2], "-2");
    assert_eq!(v["kronecker_flag"], false);
}

#[test]
fn exponent_bound_at_ratio_one() {
    let v = json(&["mu", "bound", "--rho", "1", "--d", "2"]);
    assert_eq!(v["mu_bound"], "2");
    let v = json(&["mu", "bound", "--rho", "3/2", "--d", "2"]);
    assert_eq!(v["mu_bound"], "5");
}

#[test]
fn stern_congruence_fixture_passes() {
    let v = json(&["verify", "stern_congruence", "--n", "64"]);
    assert_eq!(v["passed"], true);
    assert!(v["statement"].as_str().is_some_and(|s| !s.is_empty()));
    let listed = json(&["verify", "list"]);
    assert!(listed.as_array().unwrap().iter().any(|f| f["alias"] == "thm2_4"));
    let by_alias = json(&["verify", "thm2_4", "--n", "16", "--horizon", "40", "--terms", "1024"]);
    assert_eq!(by_alias["fixture"], "stern_pair");
}

#[test]
fn csv_table_reduces_modulo_p() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = run(&["hankel", "table", "--seq", "stern_S", "--n", "6", "--mod", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,H_n,H_n_mod_p");
    assert_eq!(lines[3], "3,-2,0");
    assert_eq!(lines.len(), 7);
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        &["hankel", "table", "--seq", "paperfolding", "--n", "30", "--mod", "3"][..],
        &["mu", "estimate", "--seq", "thue_morse_pm1", "--terms", "1024"],
        &["seq", "gen", "--random", "--seed", "9", "--order", "20"],
        &["hfrac", "expand", "--seq", "stern_S", "--order", "40", "--mod", "2"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
    assert_ne!(
        run(&["seq", "gen", "--random", "--seed", "1"]).stdout,
        run(&["seq", "gen", "--random", "--seed", "2"]).stdout
    );
}

#[test]
fn closed_form_agrees_with_table() {
    for args in [
        &["hfrac", "check52", "--seq", "thue_morse_pm1", "--order", "60"][..],
        &["hfrac", "check52", "--seq", "stern_S", "--order", "80", "--mod", "3"],
        &["hfrac", "check52", "--random", "--seed", "4", "--order", "40"],
    ] {
        assert_eq!(json(args)["passed"], true, "{args:?}");
    }
}

#[test]
fn sources_accept_json_specs_and_equations() {
    let spec = json(&["seq", "gen", "--spec", r#"{"kind":"product2","u":1,"C":[1],"D":[1]}"#, "--order", "8"]);
    assert_eq!(spec["coeffs"].as_array().unwrap().len(), 8);
    // f(z) = (1 + z) f(z^2): the all-ones series 1/(1 - z)
    let eq = json(&["seq", "gen", "--eq", r#"{"A":[],"B":[1],"C":[1,1],"D":[1],"d":2,"c0":1}"#, "--order", "6"]);
    assert_eq!(eq["coeffs"], serde_json::json!(["1", "1", "1", "1", "1", "1"]));
    let t = json(&["hankel", "table", "--eq", r#"{"A":[],"B":[1],"C":[1,1],"D":[1],"d":2,"c0":1}"#, "--n", "10"]);
    assert_eq!(t["kronecker_flag"], true);
}

#[test]
fn mahler_commands_report_their_checks() {
    assert_eq!(json(&["mahler", "iterate", "--seq", "stern_S", "--m", "3"])["passed"], true);
    let a = json(&["mahler", "approximate", "--seq", "stern_S", "--i", "2", "--m", "3"]);
    assert!(a["q"].as_str().is_some());
    assert_eq!(json(&["mahler", "audit", "--seq", "stern_S", "--i", "2", "--m", "6"])["passed"], true);
}

#[test]
fn pade_and_estimates_run() {
    let p = json(&["pade", "build", "--seq", "stern_S", "--k", "3"]);
    assert_eq!(p["k"], 3);
    let e = json(&["mu", "estimate", "--seq", "cantor", "--terms", "2048"]);
    let mu = e["mu_hat"].as_f64().unwrap();
    assert!((2.0..=2.3).contains(&mu), "{mu}");
    assert_eq!(json(&["seq", "list"]).as_array().unwrap().len(), 16);
}

#[test]
fn errors_are_json_with_nonzero_exit() {
    for args in [
        &["hankel", "det", "--seq", "nope", "--n", "3"][..],
        &["hankel", "det", "--seq", "stern_S", "--n", "3", "--mod", "4"],
        &["verify", "no_such_fixture"],
        &["mu", "eval", "--seq", "stern_S", "--b", "2", "--format", "csv"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("error json");
        assert!(err["message"].as_str().is_some(), "{args:?}");
    }
}
