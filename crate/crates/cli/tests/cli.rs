//! End-to-end tests of the eislat binary: exit codes, JSON formats, and
//! round-trips of the lattice schema.

use std::io::Write;
use std::process::{Command, Output};

fn eislat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eislat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn verify_single_check_passes_with_exit_zero() {
    let out = eislat(&["verify", "--check", "C4"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("C4"));
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn verify_json_emits_report_array() {
    let out = eislat(&["verify", "--check", "C3", "--check", "C4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let arr = reports.as_array().expect("array");
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["check"], "C3");
    assert_eq!(arr[0]["status"], "pass");
    assert_eq!(arr[1]["detail"]["norm2_vectors"], 54);
    assert!(arr[0]["ms"].is_number());
}

#[test]
fn unknown_check_id_exits_two_with_valid_list() {
    let out = eislat(&["verify", "--check", "C99"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("C15"));
}

#[test]
fn unknown_flag_rejected() {
    let out = eislat(&["verify", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn short_vectors_of_d3() {
    let out = eislat(&["short-vectors", "@d3", "--norm", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("54 vectors of norm 2"));

    // indefinite input is a usage error
    let out = eislat(&["short-vectors", "@h", "--norm", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("enumeration requires definite lattice"));
}

#[test]
fn disc_group_of_h() {
    let out = eislat(&["disc-group", "@h"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("invariant factors: (2+1*w, 2+1*w)"));
    assert!(text.contains("order: 9"));
}

#[test]
fn lattice_json_round_trips_through_the_cli() {
    // have the CLI emit the lattice it parsed, feed it back in, and compare
    let out = eislat(&["short-vectors", "@d3", "--norm", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    let lattice = v["lattice"].to_string();
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("d3.json");
    std::fs::File::create(&path)
        .and_then(|mut f| f.write_all(lattice.as_bytes()))
        .expect("write");
    let out2 = eislat(&[
        "short-vectors",
        path.to_str().unwrap(),
        "--norm",
        "2",
        "--json",
    ]);
    assert_eq!(out2.status.code(), Some(0));
    let v2: serde_json::Value = serde_json::from_str(&stdout(&out2)).expect("json");
    assert_eq!(v["lattice"], v2["lattice"]);
    assert_eq!(v["vectors"], v2["vectors"]);
    assert_eq!(v2["count"], 54);
}

#[test]
fn snf_subcommand_on_a_matrix_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("m.json");
    // the D3 Gram in matrix schema
    let matrix = serde_json::json!({
        "rows": 3,
        "cols": 3,
        "entries": [[2,0],[-1,0],[0,0],[-1,0],[2,0],[1,2],[0,0],[-1,-2],[3,0]],
    });
    std::fs::write(&path, matrix.to_string()).expect("write");
    let out = eislat(&["snf", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("invariant factors: (1, 2+1*w, 2+1*w)"));

    // the JSON form factors through u * m * v = d
    let out = eislat(&["snf", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["d"]["rows"], 3);

    // malformed input exits 2
    std::fs::write(&path, "{not json").expect("write");
    let out = eislat(&["snf", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_lattice_file_exits_two() {
    let out = eislat(&["aut", "/nonexistent/lattice.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eislat(&["aut", "@unknown"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("@lambda"));
}

#[test]
fn weyl_and_aut_orders_of_d3() {
    let out = eislat(&["weyl", "@d3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["order"], 54);
    assert_eq!(v["orbit_summary"]["orbits"], 1);
    assert_eq!(v["orbit_summary"]["vectors"], 54);

    let out = eislat(&["aut", "@d3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["order"], 1296);
}

#[test]
fn elements_dump_is_json_matrices() {
    let rank1 = serde_json::json!({
        "rank": 1,
        "gram": {"rows": 1, "cols": 1, "entries": [[2, 0]]},
    });
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("rank1.json");
    std::fs::write(&path, rank1.to_string()).expect("write");
    let out = eislat(&["aut", path.to_str().unwrap(), "--elements", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["order"], 6);
    assert_eq!(v["elements"].as_array().unwrap().len(), 6);
}

#[test]
fn classify_tau_and_lambda() {
    let out = eislat(&["classify-tau", "0", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["class"], 108);

    let out = eislat(&["classify-tau", "0", "2"]);
    assert!(stdout(&out).contains("class: 54"));

    let out = eislat(&["classify-lambda", "0", "0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["class"], 648);

    // singular parameter is an input error
    let out = eislat(&["classify-lambda", "-0.5", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("singular"));

    // lower half plane rejected
    let out = eislat(&["classify-tau", "0", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn period_prints_coordinates_norm_and_class() {
    let out = eislat(&["period", "0", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("-3.464101615"));
    assert!(text.contains("class: 108"));

    let out = eislat(&["period", "0", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    assert_eq!(v["class"], 108);
    assert_eq!(v["coords"].as_array().unwrap().len(), 5);
    let norm = v["norm"].as_f64().unwrap();
    assert!((norm + 2.0 * 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn full_verify_passes() {
    let out = eislat(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("15 of 15 checks passed"));
    for id in ["C1", "C5", "C9", "C15"] {
        assert!(text.contains(id), "missing line for {id}");
    }
}

#[test]
fn cap_override_turns_check_failure_into_exit_one() {
    // a 10-element closure cap cannot hold the order-54 Weyl group, so the
    // check reports a failure and the process exits 1
    let out = eislat(&["verify", "--check", "C4", "--cap", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    assert!(stdout(&out).contains("group not finite within cap 10"));
}

#[test]
fn grid_override_is_plumbed_through() {
    let out = eislat(&["verify", "--check", "C15", "--grid", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("json");
    // 4 generic points plus the two special ones
    assert_eq!(v[0]["detail"]["grid_points"], 6);
}
