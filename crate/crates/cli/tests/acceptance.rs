//! Acceptance criteria 1-14, one line each. Criterion 14 runs the built binary.

use std::process::Command;
use std::time::{Duration, Instant};

use bm_core::verify::{run_criterion, VerifyConfig};

const BUDGET: Duration = Duration::from_secs(300);

fn criterion_14() -> (bool, String) {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_bm"))
        .args(["verify", "--suite", "all"])
        .output()
        .expect("bm binary runs");
    let elapsed = started.elapsed();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    let count = doc["outputs"]["criteria"].as_array().map_or(0, Vec::len);
    let passed = out.status.code() == Some(0)
        && doc["outputs"]["passed"] == serde_json::Value::Bool(true)
        && count == 13
        && elapsed < BUDGET;
    let line = format!(
        "`bm verify --suite all` | exit code: {:?} | criteria reported: {count} | elapsed: {:.2}s < {}s",
        out.status.code(),
        elapsed.as_secs_f64(),
        BUDGET.as_secs()
    );
    (passed, line)
}

fn main() {
    let cfg = VerifyConfig::default();
    let mut failed = Vec::new();
    for id in 1..=13u8 {
        let report = run_criterion(id, &cfg);
        println!("{report}");
        if !report.passed {
            failed.push(id);
        }
    }
    let (ok, line) = criterion_14();
    println!("[{}] #14 {line}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        failed.push(14);
    }
    if failed.is_empty() {
        println!("acceptance: 14 of 14 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
