//! End-to-end runs of the `ilink` binary.

use std::path::Path;
use std::process::{Command, Output};

fn ilink(args: &[&str], jobs: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ilink"))
        .args(args)
        .env("ILINK_JOBS", jobs)
        .output()
        .expect("ilink runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn certificates_are_byte_identical_across_runs_and_widths() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for (i, jobs) in ["1", "4", "1"].iter().enumerate() {
        let out = path(dir.path(), &format!("c{i}.json"));
        let o = ilink(&["necklace", "--r", "3", "--seed", "9", "--out", &out], jobs);
        assert!(o.status.success(), "{}", stderr(&o));
        texts.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    assert_eq!(texts[0], texts[2]);
    let other = ilink(&["necklace", "--r", "3", "--seed", "10"], "1");
    assert!(other.status.success());
    assert_ne!(other.stdout, texts[0]);
}

#[test]
fn base_link_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "base.json");
    let o = ilink(&["base-link", "--n", "1", "--seed", "7", "--out", &out], "0");
    assert!(o.status.success(), "{}", stderr(&o));
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(cert["schema"], "linkcert/1");
    assert_eq!(cert["embedding"]["vertices"].as_object().unwrap().len(), 6);
    let v = cert["claims"][0]["value"].as_i64().unwrap();
    assert_eq!(v.rem_euclid(2), 1);
    let o = ilink(&["verify", &out], "0");
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("verified"));
    let o = ilink(&["verify", "--json", &out], "0");
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["claims"][0]["recomputed"].as_array().unwrap().len(), 3);
}

#[test]
fn flipped_component_names_the_claim() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "lk.json");
    // reversing one component flips the sign of its claim
    assert!(ilink(&["base-link", "--seed", "2", "--out", &out], "0").status.success());
    let mut cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for term in cert["components"][1]["chain"].as_array_mut().unwrap() {
        let k = term["coeff"].as_i64().unwrap();
        term["coeff"] = (-k).into();
    }
    std::fs::write(&out, cert.to_string()).unwrap();
    let o = ilink(&["verify", &out], "0");
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("verification_mismatch") && err.contains("claim 0 lk(J, X)"), "{err}");
}

#[test]
fn malformed_certificate_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "bad.json");
    std::fs::write(&out, "{\"schema\": \"linkcert/0\"}").unwrap();
    let o = ilink(&["verify", &out], "0");
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("\"schema\""));
}

#[test]
fn undersized_runs_are_refused_without_force() {
    let o = ilink(&["chain", "--r", "3", "--vertices", "11"], "0");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--force-small"));
    let o = ilink(&["modp", "--p", "2", "--vertices", "254", "--force-small"], "0");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mod p vertices"));
}

#[test]
fn embedding_file_feeds_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let emb = path(dir.path(), "e.json");
    let o = ilink(&["embed", "--n", "2", "--vertices", "8", "--seed", "3", "--out", &emb], "0");
    assert!(o.status.success());
    let o = ilink(&["base-link", "--n", "2", "--embedding", &emb], "0");
    assert!(o.status.success(), "{}", stderr(&o));
    let direct = ilink(&["base-link", "--n", "2", "--seed", "3"], "0");
    assert_eq!(o.stdout, direct.stdout);
    let o = ilink(&["base-link", "--n", "1", "--embedding", &emb], "0");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lk_of_two_triangles() {
    let o = ilink(&["lk", "--vertices", "6", "--seed", "1", "--first", "0,1,4", "--second", "2,3,5"], "0");
    assert!(o.status.success(), "{}", stderr(&o));
    let cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(cert["claims"][0]["value"].as_i64().unwrap().abs(), 1);
    let o = ilink(&["lk", "--vertices", "6", "--first", "0,1,2", "--second", "2,3,4"], "0");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn splicing_lemmas() {
    for seed in ["1", "3"] {
        let o = ilink(&["lemma-4to3", "--seed", seed], "0");
        assert!(o.status.success(), "{}", stderr(&o));
        let cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let claims = cert["claims"].as_array().unwrap();
        assert_eq!(claims.len(), 2);
        assert!(claims[0]["value"].as_i64().unwrap() >= 1);
        let o = ilink(&["lemma-3to2", "--seed", seed], "0");
        assert!(o.status.success(), "{}", stderr(&o));
        let cert: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(cert["claims"][0]["value"].as_i64().unwrap() >= 2);
    }
}

#[test]
fn selfcheck_prints_a_pass_table() {
    let o = ilink(&["selfcheck", "--configs", "40", "--pairs", "100", "--apex-pairs", "30"], "0");
    assert!(o.status.success(), "{}", stderr(&o));
    let table = String::from_utf8_lossy(&o.stdout);
    for suite in ["count-formula", "chain-identity", "lk-oracle"] {
        let line = table.lines().find(|l| l.starts_with(suite)).unwrap();
        assert!(line.ends_with("PASS"), "{line}");
    }
}
