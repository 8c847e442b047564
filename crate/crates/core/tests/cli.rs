use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coset-nvalued"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn usage_errors_exit_nonzero() {
    for args in [
        &["generate", "Q7"][..],
        &["generate"],
        &["mul", "C2", "1,0,0,0"],
        &["verify"],
        &["classify", "D0"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error:"), "{args:?}");
    }
}

#[test]
fn generate_icosahedral() {
    let v = json(&["generate", "I", "--json"]);
    assert_eq!(v["n"], 60);
    assert_eq!(v["cover_size"], 120);
    let elements = v["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 60);
    let mut orders: Vec<u64> = elements.iter().map(|e| e["order"].as_u64().unwrap()).collect();
    orders.sort_unstable();
    orders.dedup();
    assert_eq!(orders, [1, 2, 3, 5]);
}

#[test]
fn generate_reports_conjugate_alias() {
    assert_eq!(json(&["generate", "D1", "--json"])["conjugate_to"], "C2");
    assert_eq!(json(&["generate", "c2", "--json"])["conjugate_to"], "D1");
    assert_eq!(json(&["generate", "T", "--json"])["conjugate_to"], Value::Null);
}

#[test]
fn mul_identity_gives_n_copies() {
    let v = json(&["mul", "O", "1,0,0,0", "0.6,0.8,0,0", "--json"]);
    assert_eq!(v["total"], 24);
    let product = v["product"].as_array().unwrap();
    let total: u64 = product.iter().map(|e| e["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, 24);
}

#[test]
fn mul_so3_accepts_negative_coordinates() {
    let v = json(&["mul", "C3", "--base", "so3", "-1,0,0,0", "-0.6,0,0.8,0", "--json"]);
    assert_eq!(v["space"]["base"], "so3");
    assert_eq!(v["a"], serde_json::json!([1.0, 0.0, 0.0, 0.0]));
    assert_eq!(v["total"], 3);
}

#[test]
fn mul_rejects_bad_points() {
    for p in ["0,0,0,0", "3,0,0,0", "1,0,0", "a,b,c,d"] {
        let out = run(&["mul", "C2", p, "1,0,0,0"]);
        assert!(!out.status.success(), "{p}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{p}");
    }
}

#[test]
fn verify_json_echoes_configuration() {
    let v = json(&[
        "verify",
        "D3",
        "--json",
        "--seed",
        "7",
        "--samples",
        "20",
        "--triples",
        "4",
        "--tol",
        "1e-7",
    ]);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["tolerance"], 1e-7);
    assert_eq!(v["passed"], true);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        for c in r["checks"].as_array().unwrap() {
            let expected = if c["axiom"] == "associativity" { 4 } else { 20 };
            assert_eq!(c["trials"], expected);
            assert_eq!(c["failures"], 0);
        }
    }
}

#[test]
fn verify_tiny_tolerance_fails_with_exit_code() {
    let out = run(&[
        "verify",
        "T",
        "--base",
        "sp1",
        "--samples",
        "5",
        "--triples",
        "5",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn classify_parity_table() {
    for (spec, space) in [("C1", "RP3"), ("C7", "RP3"), ("C8", "S3"), ("D1", "S3"), ("I", "S3")] {
        let v = json(&["classify", spec, "--base", "so3", "--json"]);
        assert_eq!(v["predicted_space"], space, "{spec}");
        assert_eq!(v["evidence"]["parity_consistent"], true);
    }
    let v = json(&["classify", "C5", "--json"]);
    assert_eq!(v["base"], "sp1");
    assert_eq!(v["predicted_space"], "S3");
}
