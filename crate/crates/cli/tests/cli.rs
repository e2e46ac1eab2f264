use std::process::{Command, Output};

use serde_json::Value;

fn netcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcone"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("netcone-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn mw_act_example() {
    let out = netcone(&["mw-act", "--y", "[1,0,0,0,0,0,0]", "--d", "D34"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(
        r["result"]["image"],
        "5H - 4E1 - 3E3 - 3E4 - 2E5 - 2E6 - 2E7 - 2E8"
    );
    assert_eq!(r["seed"], 42);
    assert_eq!(r["config"]["reducible_quadrics"], Value::Array(vec![]));
    assert!(r["version"].is_string());
    assert_eq!(r["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn object_form_of_y() {
    let a = netcone(&["mw-act", "--y", r#"{"n":[0,1,0,0,0,0,0]}"#, "--d", "E1"]);
    assert_eq!(report(&a)["result"]["image"], "E3");
}

#[test]
fn class_errors_exit_2() {
    let out = netcone(&["mw-act", "--y", "[1,0,0,0,0,0,0]", "--d", "H + l1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot mix"));

    let out = netcone(&["model", "--class", "Hx"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("did you mean"));

    let out = netcone(&["mw-act", "--y", "[1,0]", "--d", "H"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(netcone(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(netcone(&["cover-check", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(netcone(&["nefify", "--d", "D12", "--max-flops", "0"]).status.code(), Some(2));
    assert_eq!(netcone(&["symmetries", "--format", "yaml"]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_2() {
    let bad = temp_file("bad.json", "{\"reducible_quadrics\": [[[1,2,3,4],\n[5,6");
    let out = netcone(&["--config", bad.to_str().unwrap(), "model"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2 column"));

    let rank6 = temp_file("rank6.json", r#"{"reducible_quadrics": [[[1,2,3,4],[5,6,7,8]]]}"#);
    let out = netcone(&["--config", rank6.to_str().unwrap(), "nefify", "--d", "D12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("requires Mordell–Weil rank 7"));

    // the model query itself works at any rank
    let out = netcone(&["--config", rank6.to_str().unwrap(), "model", "--class", "D^1_1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["rank"], 6);
    assert_eq!(r["result"]["class"]["class"], "H - E1 - E2 - E3 - E4");
}

#[test]
fn nefify_d12_takes_one_flop() {
    let out = netcone(&["nefify", "--d", "H - E1 - E2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["flops"], 1);
    assert_eq!(r["result"]["flop_word"][0]["fiber"], serde_json::json!([1, 2]));
    assert_eq!(r["result"]["flop_word"][0]["slot"], "line");
}

#[test]
fn nefify_failure_is_a_fail_certificate() {
    let out = netcone(&["nefify", "--d", "E1"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["certificates"][0]["status"], "fail");
    assert!(r["certificates"][0]["witnesses"]["error"].as_str().unwrap().contains("l1"));
}

#[test]
fn normalize_reports_alpha() {
    let out = netcone(&["normalize", "--d", "3H - 2E1 - E2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let alpha = r["result"]["alpha"].as_array().unwrap();
    assert_eq!(alpha.len(), 8);
}

#[test]
fn symmetries_is_deterministic() {
    let a = netcone(&["symmetries"]);
    let b = netcone(&["symmetries"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["regression_values"]["symmetry_order"], 40320);
}

#[test]
fn cover_check_reports_u_est_size() {
    let args = ["cover-check", "--samples", "40", "--seed", "42"];
    let a = netcone(&args);
    let b = netcone(&args);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert!(r["regression_values"]["u_est_size"].is_u64());
    // exit 1 exactly when some certificate failed
    let any_fail = r["certificates"].as_array().unwrap().iter().any(|c| c["status"] == "fail");
    assert_eq!(a.status.code(), Some(if any_fail { 1 } else { 0 }));
}

#[test]
fn markdown_and_output_file() {
    let path = std::env::temp_dir().join(format!("netcone-cli-{}-report.md", std::process::id()));
    let out = netcone(&["symmetries", "--format", "markdown", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("| nef_symmetries | pass |"));
    assert!(text.contains("symmetry_order: 40320"));
}

#[test]
fn timings_are_opt_in() {
    let plain = report(&netcone(&["symmetries"]));
    assert!(plain["certificates"][0].get("runtime_ms").is_none());
    let timed = report(&netcone(&["symmetries", "--timings"]));
    assert!(timed["certificates"][0]["runtime_ms"].is_u64());
}
