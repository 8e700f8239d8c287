use std::process::Command;

use bm_cli::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use serde_json::Value;

fn json_of(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["bm"];
    argv.extend_from_slice(args);
    let out = run(argv);
    let doc = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, doc)
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    v.as_f64().is_some_and(|x| (x - want).abs() <= tol)
}

#[test]
fn angle_example() {
    let (code, doc) = json_of(&["angle", "--a", "2.718281828,1,1,1", "--b", "1,1,1,1"]);
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["eta"], 0.433013, 1e-6));
    assert_eq!(doc["op"], "angle");
    for key in ["inputs", "outputs", "paper_ref", "config"] {
        assert!(!doc[key].is_null(), "{key}");
    }
}

#[test]
fn planar_angle() {
    let (code, doc) = json_of(&["angle", "--a", "2.718281828459045,1", "--b", "1,1"]);
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["eta"], 0.5, 1e-12));
    let out = run(["bm", "angle", "--a", "1,1,1", "--b", "1,1,1"]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn compose_example() {
    let (code, doc) = json_of(&["compose", "--s1", "0.5,0,0", "--s2", "0.5,0,0"]);
    assert_eq!(code, EXIT_OK);
    let s3 = &doc["outputs"]["s3"];
    assert!(close(&s3[0], 0.8, 1e-12) && close(&s3[1], 0.0, 1e-12) && close(&s3[2], 0.0, 1e-12));
}

#[test]
fn negative_components_parse() {
    let (code, doc) = json_of(&["subtract", "--s3", "0.8,0,0", "--s2", "0.5,0,0"]);
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["s1"][0], 0.5, 1e-12));
    let (code, doc) = json_of(&["invert-velocity", "--s", "-0.5,0,0"]);
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["s_inv"][0], 0.5, 1e-12));
    let (code, doc) = json_of(&["rotate", "--y", "2,0.5,3,1", "--theta", "0.3", "--psi", "0.7", "--phi", "-0.2"]);
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["F_image"], 3f64.powf(0.25), 1e-12));
}

#[test]
fn boost_and_lengths() {
    let (code, doc) = json_of(&["boost", "--y", "1,0,0,0", "--s", "0.5,0,0"]);
    assert_eq!(code, EXIT_OK);
    let y = &doc["outputs"]["y_boosted"];
    assert!(close(&y[0], 1.154701, 1e-6) && close(&y[1], 0.577350, 1e-6));
    let (_, doc) = json_of(&["kin-length", "--y", "1,0.5,0,0"]);
    assert!(close(&doc["outputs"]["value"], 0.866025, 1e-6));
}

#[test]
fn geodesics() {
    let (code, doc) = json_of(&["geodesic-bvp", "--y1", "1,1,1,1", "--y2", "4,4,4,4", "--samples", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["delta_s"], 3.0, 1e-12));
    assert_eq!(doc["outputs"]["samples"].as_array().unwrap().len(), 4);

    let (code, doc) = json_of(&[
        "geodesic-ivp", "--start", "1,2,0.5,1", "--direction", "1,0.4,0.9,1.2", "--length", "2", "--rk4-step", "1e-3",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(doc["outputs"]["rk4_max_deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn metric_and_frames() {
    let (code, doc) = json_of(&["metric", "--y", "1,2,3,4"]);
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["det"], -1.0 / 256.0, 1e-15));
    assert_eq!(doc["outputs"]["signature"], serde_json::json!([1, 3, 0]));
    let (_, doc) = json_of(&["tetrad", "--y", "1,2,3,4"]);
    assert!(close(&doc["outputs"]["det_h"].as_f64().map(f64::abs).into(), 1.0 / 16.0, 1e-12));
    let (_, there) = json_of(&["chart", "--y", "2,1,3,0.5"]);
    let o = &there["outputs"];
    let z = format!("{},{},{},{}", o["z0"], o["u"][0], o["u"][1], o["u"][2]);
    let (code, back) = json_of(&["chart", "--z", &z]);
    assert_eq!(code, EXIT_OK);
    for (i, want) in [2.0, 1.0, 3.0, 0.5].iter().enumerate() {
        assert!(close(&back["outputs"]["y"][i], *want, 1e-12));
    }
    assert_eq!(run(["bm", "chart"]).code, EXIT_USAGE);
}

#[test]
fn dilate() {
    let (code, doc) = json_of(&["dilate", "--k", "2,0.5,1,1", "--y", "1,1,1,1"]);
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["F_image"], 1.0, 1e-12));
    let (code, doc) = json_of(&["dilate", "--k", "2,2,1,1", "--y", "1,1,1,1"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(doc["error"]["precondition"], "unimodular");
}

#[test]
fn domain_errors_name_the_precondition() {
    let (code, doc) = json_of(&["distance", "--a", "1,1,1,1", "--b", "2.718281828,1,1,1"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(doc["error"]["precondition"], "timelike_chord");
    let (code, doc) = json_of(&["compose", "--s1", "0.9,0.9,0", "--s2", "0,0,0"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(doc["error"]["precondition"], "admissible_velocity");
    let (code, doc) = json_of(&["metric", "--y", "1,-1,1,1"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert_eq!(doc["error"]["precondition"], "up_sector");
    let (code, _) = json_of(&["kin-length", "--y", "1,2,0,0"]);
    assert_eq!(code, EXIT_DOMAIN);
}

#[test]
fn usage_errors() {
    assert_eq!(run(["bm"]).code, EXIT_USAGE);
    assert_eq!(run(["bm", "frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(["bm", "angle", "--a", "1,x,1,1", "--b", "1,1,1,1"]).code, EXIT_USAGE);
    assert_eq!(run(["bm", "metric", "--y", "1,1,1"]).code, EXIT_USAGE);
    assert_eq!(run(["bm", "verify", "--tol-fd", "-1"]).code, EXIT_USAGE);
    assert_eq!(run(["bm", "verify", "--suite", "nonsense"]).code, EXIT_USAGE);
    assert_eq!(run(["bm", "metric", "--y", "1,1,1,1", "--input", "/nonexistent/bm.json"]).code, EXIT_USAGE);
    assert_eq!(run(["bm", "--help"]).code, EXIT_OK);
}

#[test]
fn verify_exit_codes() {
    let out = run(["bm", "verify", "--suite", "kinematics"]);
    assert_eq!(out.code, EXIT_OK);
    let out = run(["bm", "verify", "--suite", "metric", "--tol-fd", "1e-30"]);
    assert_eq!(out.code, EXIT_VERIFY);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["outputs"]["passed"], false);
}

#[test]
fn csv_and_plain_outputs() {
    let out = run(["bm", "compose", "--s1", "0.5,0,0", "--s2", "0,0.5,0", "--output", "csv"]);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next().unwrap(), "s3[0],s3[1],s3[2]");
    let vals: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    for (v, want) in vals.iter().zip([0.5, 0.5, 0.25]) {
        assert!((v - want).abs() < 1e-12);
    }
    let out = run(["bm", "verify", "--suite", "frames", "--output", "plain"]);
    assert!(out.stdout.lines().filter(|l| l.starts_with("[PASS]")).count() == 2);
}

#[test]
fn output_is_deterministic() {
    let a = run(["bm", "verify", "--suite", "geodesics"]);
    let b = run(["bm", "verify", "--suite", "geodesics"]);
    assert_eq!(a, b);
}

#[test]
fn input_file_fills_flags() {
    let path = std::env::temp_dir().join(format!("bm-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"s1": [0.5, 0, 0], "s2": [0.5, 0, 0]}"#).unwrap();
    let (code, doc) = json_of(&["compose", "--input", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, EXIT_OK);
    assert!(close(&doc["outputs"]["s3"][0], 0.8, 1e-12));

    // a previous result document can be replayed
    let (_, first) = json_of(&["angle", "--a", "3,1,2,1", "--b", "1,1,1,1"]);
    let path = std::env::temp_dir().join(format!("bm-cli-replay-{}.json", std::process::id()));
    std::fs::write(&path, first.to_string()).unwrap();
    let (code, again) = json_of(&["angle", "--input", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, EXIT_OK);
    assert_eq!(again["outputs"], first["outputs"]);
}

#[test]
fn binary_reads_constants_from_environment() {
    let bin = env!("CARGO_BIN_EXE_bm");
    let chart = |choice: &str| -> Value {
        let out = Command::new(bin).args(["chart", "--y", "2,1,1,1"]).env("BM_CONSTANTS", choice).output().unwrap();
        assert!(out.status.success());
        serde_json::from_slice(&out.stdout).unwrap()
    };
    let h = chart("hadamard");
    let o = chart("orthonormal");
    assert_eq!(h["config"]["constants"], "hadamard");
    assert_eq!(o["config"]["constants"], "orthonormal");
    assert_ne!(h["outputs"]["u"], o["outputs"]["u"]);

    let out = Command::new(bin)
        .args(["chart", "--y", "2,1,1,1", "--constants", "hadamard"])
        .env("BM_CONSTANTS", "orthonormal")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["config"]["constants"], "hadamard");

    let out = Command::new(bin).args(["angle", "--a", "1,1,1,1", "--b", "x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    let out = Command::new(bin).args(["distance", "--a", "1,1,1,1", "--b", "2.7,1,1,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_DOMAIN));
}
