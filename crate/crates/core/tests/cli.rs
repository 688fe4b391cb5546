use std::process::Command;

use catalog_derivations::basis::{eta, shi_basis, tau};
use catalog_derivations::serial::{field_from_json, FieldJson, SCHEMA};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_catalog-derivations"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = run(&["verify", "cat", "--l", "3", "--m", "1"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema"], SCHEMA);
    assert_eq!(doc["overall"], true);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 3);

    let (code, out, _) = run(&[
        "verify",
        "braid-even",
        "--l",
        "2",
        "--m",
        "1",
        "--format",
        "text",
    ]);
    assert_eq!(code, 0);
    assert!(out.ends_with("overall: true\n"));
}

#[test]
fn parameter_errors_go_to_stderr() {
    for args in [
        &["basis", "shi", "--l", "2", "--m", "0"][..],
        &["basis", "cat", "--l", "1", "--m", "1"],
        &["field", "zeta", "--l", "2", "--m", "1", "--k", "x"],
        &["bogus"],
        &[],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 1, "{args:?}");
        assert!(out.is_empty(), "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn bernoulli_last_entry() {
    let (code, out, _) = run(&["bernoulli", "--n", "4"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let polys = doc["polynomials"].as_array().unwrap();
    assert_eq!(polys.len(), 5);
    let last = &polys[4];
    assert_eq!(last["vars"], serde_json::json!(["t", "z"]));
    let terms: Vec<(String, Vec<u64>)> = last["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            (
                t["c"].as_str().unwrap().to_string(),
                t["e"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|e| e.as_u64().unwrap())
                    .collect(),
            )
        })
        .collect();
    let expected = [("1/1", 4), ("-2/1", 3), ("1/1", 2), ("-1/30", 0)];
    assert_eq!(terms.len(), expected.len());
    for ((c, e), (wc, we)) in terms.iter().zip(expected) {
        assert_eq!(c, wc);
        assert_eq!(e, &vec![we, 0]);
    }
}

#[test]
fn emitted_fields_round_trip() {
    let (code, out, _) = run(&["field", "eta", "--l", "3", "--m", "1", "--k", "1"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let field: FieldJson = serde_json::from_value(doc["field"].clone()).unwrap();
    assert_eq!(field_from_json(&field).unwrap(), eta(3, 1, 1).unwrap());

    let (_, out, _) = run(&["field", "tau", "--l", "2", "--m", "2", "--k", "1"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let field: FieldJson = serde_json::from_value(doc["field"].clone()).unwrap();
    assert_eq!(field_from_json(&field).unwrap(), tau(2, 2, 1).unwrap());

    let (_, out, _) = run(&["basis", "shi", "--l", "3", "--m", "1"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let parsed: Vec<_> = doc["fields"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| field_from_json(&serde_json::from_value::<FieldJson>(f.clone()).unwrap()).unwrap())
        .collect();
    assert_eq!(parsed, shi_basis(3, 1).unwrap());
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "shi", "--l", "3", "--m", "1"];
    let first = run(&args);
    let second = bin()
        .args(args)
        .env("CATALOG_DERIVATIONS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first.1.as_bytes(), second.stdout.as_slice());
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = bin()
        .args(["bernoulli", "--n", "2"])
        .env("CATALOG_DERIVATIONS_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn writes_output_file() {
    let dir = std::env::temp_dir().join(format!("catalog-derivations-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("basis.json");
    let (code, out, _) = run(&[
        "basis",
        "cat",
        "--l",
        "2",
        "--m",
        "1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["arrangement"]["label"], "cCat(l=2, m=1)");
    assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
