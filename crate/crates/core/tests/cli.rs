use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schmidt-bench")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, value: &Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn certify_file(dir: &TempDir, value: &Value) -> (i32, String) {
    let path = write(dir, "data.json", value);
    let out = run(&["certify", "--data", &path]);
    (out.status.code().unwrap(), stdout(&out))
}

#[test]
fn thresholds_table_is_stable() {
    let out = run(&["thresholds", "--d", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = "\
# Schmidt-number thresholds, d = 4 (qudit)
   k        F(k)     uniform     process
   1    0.625000    0.400000    0.250000
   2    0.750000    0.600000    0.500000
   3    0.875000    0.800000    0.750000
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn thresholds_json_lists_ladder() {
    let out = run(&["thresholds", "--d", "3", "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("0.6666666666666666"), "{text}");
    assert!(text.contains("0.8333333333333334"), "{text}");
}

#[test]
fn qubit_mode_rejects_non_power_of_two() {
    let out = run(&["thresholds", "--d", "3", "--mode", "qubits"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn certify_average_form() {
    let dir = TempDir::new().unwrap();
    let (code, text) = certify_file(&dir, &json!({"d": 4, "f_avg": 0.89}));
    assert_eq!(code, 0);
    let cert: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(cert["certified_schmidt_number"], 4);
    assert_eq!(cert["d"], 4);
}

#[test]
fn certify_per_state_form() {
    let dir = TempDir::new().unwrap();
    let data = json!({
        "d": 2,
        "mode": "qudit",
        "z_fidelities": [0.95, 0.93],
        "x_fidelities": [0.85, 0.87]
    });
    let (code, text) = certify_file(&dir, &data);
    assert_eq!(code, 0);
    let cert: Value = serde_json::from_str(&text).unwrap();
    assert!((cert["f_avg"].as_f64().unwrap() - 0.9).abs() < 1e-12);
    assert_eq!(cert["certified_schmidt_number"], 2);
}

#[test]
fn certify_below_threshold_exits_three() {
    let dir = TempDir::new().unwrap();
    let (code, text) = certify_file(&dir, &json!({"d": 2, "f_avg": 0.75}));
    assert_eq!(code, 3);
    let cert: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(cert["certified_schmidt_number"], 1);
}

#[test]
fn certify_rejects_bad_data() {
    let dir = TempDir::new().unwrap();
    let cases = [
        json!({"d": 2, "f_avg": 1.2}),
        json!({"d": 1, "f_avg": 0.9}),
        json!({"d": 2, "z_fidelities": [0.9], "x_fidelities": [0.9, 0.9]}),
        json!({"d": 2, "z_fidelities": [0.9, -0.1], "x_fidelities": [0.9, 0.9]}),
        json!({"d": 3, "mode": "qubits", "z_fidelities": [0.9, 0.9, 0.9], "x_fidelities": [0.9, 0.9, 0.9]}),
        json!({"d": 2, "f_avg": 0.9, "extra": true}),
    ];
    for case in cases {
        let (code, _) = certify_file(&dir, &case);
        assert_eq!(code, 2, "{case}");
    }
    let out = run(&["certify", "--data", "/nonexistent/data.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_builtin_channels() {
    let cases = [
        (vec!["--channel", "identity", "--d", "3"], 0),
        (vec!["--channel", "ebz", "--d", "3"], 3),
        (vec!["--channel", "satur:1", "--d", "4"], 3),
        (vec!["--channel", "satur:3", "--d", "4"], 0),
        (vec!["--channel", "depol:0.1", "--d", "4"], 0),
        (vec!["--channel", "depol-cnot:0.1", "--target", "cnot", "--mode", "qubits"], 0),
    ];
    for (args, expected) in cases {
        let mut full = vec!["eval"];
        full.extend(&args);
        let out = run(&full);
        assert_eq!(out.status.code(), Some(expected), "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn eval_json_reports_both_paths() {
    let out = run(&["eval", "--channel", "satur:2", "--d", "4", "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let direct = v["report"]["f_avg"].as_f64().unwrap();
    assert!((direct - 0.75).abs() < 1e-12);
    assert_eq!(v["certificate"]["certified_schmidt_number"], 2);
}

fn matrix(rows: &[&[f64]]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|&x| json!([x, 0.0])).collect()))
            .collect(),
    )
}

#[test]
fn eval_channel_file() {
    let dir = TempDir::new().unwrap();
    // bit flip with probability 0.2
    let a = 0.8f64.sqrt();
    let b = 0.2f64.sqrt();
    let channel = json!({"d": 2, "kraus": [matrix(&[&[a, 0.0], &[0.0, a]]), matrix(&[&[0.0, b], &[b, 0.0]])]});
    let path = write(&dir, "flip.json", &channel);
    let out = run(&["eval", "--channel", &path, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["report"]["f_z"].as_f64().unwrap() - 0.8).abs() < 1e-12);
    assert!((v["report"]["f_x"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["report"]["f_avg"].as_f64().unwrap() - 0.9).abs() < 1e-12);
}

#[test]
fn eval_rejects_non_trace_preserving_file() {
    let dir = TempDir::new().unwrap();
    let channel = json!({"d": 2, "kraus": [matrix(&[&[1.0, 0.0], &[0.0, 0.5]])]});
    let path = write(&dir, "bad.json", &channel);
    let out = run(&["eval", "--channel", &path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace"));
}

#[test]
fn eval_with_target_file() {
    let dir = TempDir::new().unwrap();
    // Hadamard target, channel applies Hadamard: perfect gate
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let target = json!({"d": 2, "matrix": matrix(&[&[h, h], &[h, -h]])});
    let channel = json!({"d": 2, "kraus": [matrix(&[&[h, h], &[h, -h]])]});
    let target_path = write(&dir, "target.json", &target);
    let channel_path = write(&dir, "channel.json", &channel);
    let out = run(&["eval", "--channel", &channel_path, "--target", &target_path, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["report"]["f_avg"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn verify_bounds_small_run_passes() {
    let out = run(&["verify-bounds", "--d-max", "3", "--restarts", "8", "--max-iters", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn verify_bounds_rejects_out_of_range() {
    assert_eq!(run(&["verify-bounds", "--d-max", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify-bounds", "--restarts", "0"]).status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_input_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn channel_json_round_trip_through_library() {
    use schmidt_bench::channels::saturating_channel;
    use schmidt_bench::QuantumChannel;
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("satur.json");
    let ch = saturating_channel(3, 2).unwrap();
    ch.save(&path).unwrap();
    let back = QuantumChannel::load(Path::new(&path)).unwrap();
    let d = ch.choi().unwrap().matrix().distance(back.choi().unwrap().matrix());
    assert!(d < 1e-14);
    let out = run(&["eval", "--channel", path.to_str().unwrap(), "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["report"]["f_avg"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-12);
}
