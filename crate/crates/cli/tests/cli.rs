use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

fn vertexlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vertexlab"))
        .args(args)
        .env_remove("VERTEXLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn table_of_s3() {
    let s3 = corpus("s3.json");
    let out = vertexlab(&["table", s3.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["order"], 6);
    assert_eq!(v["classes"].as_array().unwrap().len(), 3);
    assert_eq!(v["characters"].as_array().unwrap().len(), 3);
}

#[test]
fn nucleus_trace_ends_in_w() {
    let s3 = corpus("s3.json");
    let out = vertexlab(&["nucleus", s3.to_str().unwrap(), "--char", "2", "--pi", "2"]);
    assert!(out.status.success());
    let v = json_of(&out);
    // the degree-2 character of S3 has nucleus A3 for π = {2}
    assert_eq!(v["w"].as_array().unwrap().len(), 3);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["t"], v["w"]);
}

#[test]
fn vertices_with_pi_complement() {
    let s3 = corpus("s3.json");
    let out = vertexlab(&["vertices", s3.to_str().unwrap(), "--pi-complement", "3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["pi"], "{3}'");
    let orders: Vec<usize> =
        v["vertices"].as_array().unwrap().iter().map(|r| r["q"].as_array().unwrap().len()).collect();
    assert_eq!(orders, vec![3, 3, 3]);
}

#[test]
fn ipi_lists_lifts_and_vertices() {
    let s3 = corpus("s3.json");
    let out = vertexlab(&["ipi", s3.to_str().unwrap(), "--pi", "3"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let members = v["members"].as_array().unwrap();
    assert_eq!(members.len(), v["pi_classes"].as_array().unwrap().len());
    assert_eq!(members[0]["lifts"], serde_json::json!([0, 1]));
    assert_eq!(members[1]["vertex"], serde_json::json!([0]));
}

#[test]
fn verify_reports_passes() {
    let s3 = corpus("s3.json");
    let out = vertexlab(&["verify", s3.to_str().unwrap(), "--pi", "3", "--check", "theorem-main,lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    let results = json_of(&out);
    let results = results.as_array().unwrap();
    assert!(results.len() >= 9);
    assert!(results.iter().all(|r| r["status"] != "fail"));
}

#[test]
fn verify_skips_non_separable() {
    let a5 = corpus("a5.json");
    let out = vertexlab(&["verify", a5.to_str().unwrap(), "--pi", "2", "--check", "cor-counts"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)[0]["status"], "skipped-precondition");
}

#[test]
fn input_errors_exit_two() {
    let missing = vertexlab(&["table", "/nonexistent/group.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let s3 = corpus("s3.json");
    let bad_check = vertexlab(&["verify", s3.to_str().unwrap(), "--pi", "2", "--check", "theorem-z"]);
    assert_eq!(bad_check.status.code(), Some(2));
    let bad_prime = vertexlab(&["vertices", s3.to_str().unwrap(), "--pi-complement", "4"]);
    assert_eq!(bad_prime.status.code(), Some(2));
    let bad_index = vertexlab(&["nucleus", s3.to_str().unwrap(), "--char", "7", "--pi", "2"]);
    assert_eq!(bad_index.status.code(), Some(2));
    let capped = vertexlab(&["--cap-order", "10", "table", corpus("s4.json").to_str().unwrap()]);
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn empty_manifest_is_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.json");
    std::fs::write(&manifest, r#"{"entries":[]}"#).unwrap();
    let out = vertexlab(&["corpus", "run", manifest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), serde_json::json!([]));
}

#[test]
fn corpus_with_missing_entry_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus("s3.json"), dir.path().join("s3.json")).unwrap();
    let manifest = dir.path().join("manifest.json");
    std::fs::write(&manifest, r#"{"entries":[{"file":"s3.json","pi_sets":["2"]},{"file":"missing.json"}]}"#).unwrap();
    let out = vertexlab(&["corpus", "run", manifest.to_str().unwrap(), "--jobs", "2", "--check", "table"]);
    assert_eq!(out.status.code(), Some(2));
    let results = json_of(&out);
    assert_eq!(results[0]["status"], "pass");
    assert_eq!(results[1]["check"], "load");
}

#[test]
fn table_cache_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let d8 = corpus("d8.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_vertexlab"))
            .args(["table", d8.to_str().unwrap()])
            .env("VERTEXLAB_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}
