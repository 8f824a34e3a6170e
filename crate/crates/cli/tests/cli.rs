use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn gsi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsi")).args(args).output().unwrap()
}

fn gsi_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gsi"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn shannon_z8_input() -> Value {
    json!({
        "group": {"model": "finite", "moduli": ["8"]},
        "lattices": [
            {"model": "cyclic", "modulus": "8", "basis": [["2"]], "dimension": 1},
            {"model": "cyclic", "modulus": "8", "basis": [["2"]], "dimension": 1}
        ],
        "tiling": {"tiles": [{"points": [0, 1, 2, 3]}, {"points": [4, 5, 6, 7]}]}
    })
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(gsi(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(gsi(&["analyze", "bandwidth", "--family", "geometric"]).status.code(), Some(64));
    let o = gsi(&["analyze", "bandwidth", "--family", "geometric", "--ratio", "2", "--tolerance=-1"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(json_out(&o)["error"], "UsageError");
}

#[test]
fn help_exits_zero() {
    assert_eq!(gsi(&["--help"]).status.code(), Some(0));
}

#[test]
fn geometric_bandwidth_of_dyadic_family() {
    let o = gsi(&["analyze", "bandwidth", "--family", "geometric", "--ratio", "2"]);
    assert!(o.status.success());
    assert_eq!(json_out(&o), json!("1"));
}

#[test]
fn computational_errors_exit_1_with_json() {
    let o = gsi_stdin(&["verify", "parseval", "--input", "-"], "{\"group\": {\"model\": \"klein\"}}");
    assert_eq!(o.status.code(), Some(1));
    let v = json_out(&o);
    assert!(v["error"].is_string() && v["message"].is_string());
}

#[test]
fn shannon_pipeline_passes_parseval() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.json");
    let sys = dir.path().join("sys.json");
    std::fs::write(&input, shannon_z8_input().to_string()).unwrap();
    let o = gsi(&["construct", "shannon", "--input", input.to_str().unwrap(), "--output", sys.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let o = gsi(&["verify", "parseval", "--input", sys.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json_out(&o)["verdicts"]["parseval"]["status"], "pass");
}

#[test]
fn corrupted_shannon_fails_with_witness() {
    let built = json_out(&gsi_stdin(&["construct", "shannon", "--input", "-"], &shannon_z8_input().to_string()));
    let mut sys = built["system"].clone();
    sys["layers"][1]["analysis"]["values"][0] = json!(["0.9", "0"]);
    let o = gsi_stdin(&["verify", "parseval", "--input", "-"], &sys.to_string());
    assert_eq!(o.status.code(), Some(2));
    let v = json_out(&o);
    assert_eq!(v["verdicts"]["parseval"]["status"], "fail");
    assert!(v["verdicts"]["parseval"]["witness"].as_str().is_some_and(|w| w.starts_with("alpha=")));
}

#[test]
fn greedy_partitions_through_verify() {
    let two = gsi(&["construct", "br", "--N", "2", "--count", "6"]);
    let o = gsi_stdin(&["verify", "parseval", "--input", "-"], &String::from_utf8_lossy(&two.stdout));
    assert_eq!(o.status.code(), Some(0));
    let three = gsi(&["construct", "br", "--N", "3", "--count", "5"]);
    let o = gsi_stdin(&["verify", "audit", "--bounds", "1,1", "--input", "-"], &String::from_utf8_lossy(&three.stdout));
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["ucp"]["status"], "violated");
}

#[test]
fn unlicensed_system_is_not_certifiable() {
    let built = json_out(&gsi_stdin(&["construct", "shannon", "--input", "-"], &shannon_z8_input().to_string()));
    let mut sys = built["system"].clone();
    sys["ucp"] = json!({"status": "unknown"});
    let o = gsi_stdin(&["verify", "parseval", "--input", "-"], &sys.to_string());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn calderon_csv_has_header() {
    let built = gsi_stdin(&["construct", "shannon", "--input", "-"], &shannon_z8_input().to_string());
    let o = gsi_stdin(&["analyze", "calderon", "--csv", "--input", "-"], &String::from_utf8_lossy(&built.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,value"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn repro_goldens_match() {
    for args in [
        &["repro", "example-3.11", "--N", "2", "--check"][..],
        &["repro", "example-3.11", "--N", "3", "--check"],
        &["repro", "example-4.6", "--check"],
        &["repro", "example-5.8", "--check"],
        &["repro", "example-5.9", "--check"],
    ] {
        let o = gsi(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn repro_without_golden_is_a_usage_error() {
    assert_eq!(gsi(&["repro", "example-3.11", "--N", "5", "--check"]).status.code(), Some(64));
}

#[test]
fn output_is_byte_identical_across_runs_and_threads() {
    let a = gsi(&["repro", "example-5.9"]).stdout;
    let b = gsi(&["repro", "example-5.9"]).stdout;
    assert_eq!(a, b);
    let one = Command::new(env!("CARGO_BIN_EXE_gsi"))
        .args(["construct", "small-bw-onb", "--modulus", "32"])
        .env("GSI_THREADS", "1")
        .output()
        .unwrap()
        .stdout;
    let many = Command::new(env!("CARGO_BIN_EXE_gsi"))
        .args(["construct", "small-bw-onb", "--modulus", "32"])
        .env("GSI_THREADS", "4")
        .output()
        .unwrap()
        .stdout;
    assert!(!one.is_empty());
    assert_eq!(one, many);
}
