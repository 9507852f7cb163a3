use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reconforge"))
        .current_dir(dir)
        .env_remove("RECONFORGE_CAP")
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["generate", "cube", "--graph-out", "cube.json", "--embedding-out", "cube.emb.json"],
    );
    assert_eq!(out.status.code(), Some(0));
    write(dir.path(), "k4.json", r#"{"n":4,"edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#);
    write(dir.path(), "k2.json", r#"{"n":2,"edges":[[0,1]]}"#);
    write(dir.path(), "k3.json", r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#);
    dir
}

#[test]
fn validate_cube_succeeds() {
    let dir = setup();
    let out = run(dir.path(), &["validate", "--kind", "sphere-quad", "cube.json", "cube.emb.json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["valid"], true);
    assert_eq!(report["face_count"], 6);
}

#[test]
fn validate_wrong_class_is_negative() {
    let dir = setup();
    let out = run(dir.path(), &["validate", "--kind", "pp-quad", "cube.json", "cube.emb.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["valid"], false);
}

#[test]
fn frozen_pair_is_unreachable() {
    let dir = setup();
    write(dir.path(), "id.json", "[0,1,2,3]");
    write(dir.path(), "sw.json", "[1,0,2,3]");
    let out = run(
        dir.path(),
        &["verify", "--rule", "irreflexive", "k4.json", "k4.json", "id.json", "sw.json"],
    );
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["result"], "unreachable");
    assert_eq!(v["component_size"], 1);
}

#[test]
fn reachable_pair_has_valid_witness() {
    let dir = setup();
    write(dir.path(), "f.json", "[0,1]");
    write(dir.path(), "g.json", "[1,0]");
    let out = run(dir.path(), &["verify", "k2.json", "k3.json", "f.json", "g.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"], "reachable");
    assert_eq!(v["moves"], 3);
    assert_eq!(v["witness_valid"], true);
}

#[test]
fn missing_file_is_a_usage_error() {
    let dir = setup();
    let out = run(dir.path(), &["verify", "k2.json", "k3.json", "nope.json", "nope.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.json"));
}

#[test]
fn malformed_input_and_bad_flags_exit_two() {
    let dir = setup();
    write(dir.path(), "bad.json", r#"{"n":2,"edges":[[0,7]]}"#);
    let out = run(dir.path(), &["validate", "--kind", "sphere-quad", "bad.json", "cube.emb.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["generate", "wheel"]).status.code(), Some(2));
}

#[test]
fn gadget_round_trip_and_cap() {
    let dir = setup();
    let out = run(
        dir.path(),
        &["compile-gadget", "--kind", "not-all-zero", "cube.json", "cube.emb.json", "--out", "naz.json"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["signals"].as_array().unwrap().len(), 4);
    let out = run(dir.path(), &["verify-gadget", "naz.json"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["transitions"]["status"], "pass");
    assert_eq!(report["host_frozen"], true);

    let capped = Command::new(env!("CARGO_BIN_EXE_reconforge"))
        .current_dir(dir.path())
        .env("RECONFORGE_CAP", "2")
        .args(["verify-gadget", "naz.json"])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(json(&capped)["result"], "cap-exceeded");
    // The flag beats the environment.
    let flagged = Command::new(env!("CARGO_BIN_EXE_reconforge"))
        .current_dir(dir.path())
        .env("RECONFORGE_CAP", "2")
        .args(["--cap", "100000", "verify-gadget", "naz.json"])
        .output()
        .unwrap();
    assert_eq!(flagged.status.code(), Some(0));
}

#[test]
fn reflexive_gadgets_compile_and_verify() {
    let dir = setup();
    run(
        dir.path(),
        &["generate", "reflexive-octahedron", "--graph-out", "oct.json", "--embedding-out", "oct.emb.json"],
    );
    for (kind, extra) in [("not-both-one", None), ("listable", Some("0,2"))] {
        let mut args = vec!["compile-gadget", "--kind", kind, "oct.json", "oct.emb.json", "--out", "g.json"];
        if let Some(set) = extra {
            args.extend(["--set", set]);
        }
        assert_eq!(run(dir.path(), &args).status.code(), Some(0), "{kind}");
        let out = run(dir.path(), &["verify-gadget", "g.json"]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        assert_eq!(json(&out)["rule"], "reflexive");
    }
}

#[test]
fn reduce_lift_walk() {
    let dir = setup();
    write(dir.path(), "f.json", "[0,1]");
    write(dir.path(), "g.json", "[0,2]");
    let out = run(
        dir.path(),
        &["reduce", "k2.json", "f.json", "g.json", "cube.json", "cube.emb.json", "--out", "bundle"],
    );
    assert_eq!(out.status.code(), Some(0));
    let manifest = json(&out);
    assert_eq!(manifest["not_both_one"], 8);
    assert_eq!(manifest["not_all_zero"], 2);
    for name in ["g_prime.json", "f_prime.json", "g_prime_target.json", "registry.json", "source.json"] {
        assert!(dir.path().join("bundle").join(name).exists(), "{name}");
    }

    write(dir.path(), "w.json", "[[0,1],[0,2]]");
    let out = run(dir.path(), &["lift", "bundle", "w.json"]);
    assert_eq!(out.status.code(), Some(0));
    let lifted = json(&out);
    let states = lifted.as_array().unwrap();
    let f_prime: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("bundle/f_prime.json")).unwrap()).unwrap();
    let g_prime: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bundle/g_prime_target.json")).unwrap()).unwrap();
    assert_eq!(states.first(), Some(&f_prime));
    assert_eq!(states.last(), Some(&g_prime));

    // Non-adjacent steps are rejected.
    write(dir.path(), "bad.json", "[[0,1],[2,3]]");
    assert_eq!(run(dir.path(), &["lift", "bundle", "bad.json"]).status.code(), Some(2));

    let out = run(dir.path(), &["--seed", "11", "walk", "bundle", "--steps", "500"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["violations"], 0);
}

#[test]
fn transforms() {
    let dir = setup();
    run(
        dir.path(),
        &["generate", "projective-wheel", "--k", "5", "--graph-out", "w5.json", "--embedding-out", "w5.emb.json"],
    );
    let out = run(dir.path(), &["transform", "pp-lift", "w5.json", "w5.emb.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["graph"]["n"], 12);

    let out = run(dir.path(), &["transform", "retraction", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["check"]["is_retraction"], true);
    assert_eq!(run(dir.path(), &["transform", "retraction", "5"]).status.code(), Some(2));

    write(dir.path(), "c4.json", r#"{"n":4,"edges":[[0,1],[1,2],[2,3],[3,0]]}"#);
    write(dir.path(), "a.json", "[0,1,0,1]");
    write(dir.path(), "b.json", "[0,1,0,2]");
    let out = run(dir.path(), &["transform", "times-k2", "c4.json", "k3.json", "a.json", "b.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["agree"], true);
    assert_eq!(v["cover"]["n"], 6);
}

#[test]
fn output_is_deterministic() {
    let dir = setup();
    run(
        dir.path(),
        &["generate", "reflexive-octahedron", "--graph-out", "oct.json", "--embedding-out", "oct.emb.json"],
    );
    let args = ["compile-gadget", "--kind", "not-all-zero", "oct.json", "oct.emb.json"];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dot_output() {
    let dir = setup();
    let out = run(dir.path(), &["generate", "cube", "--dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graph G {"));
    assert_eq!(text.matches(" -- ").count(), 12);
}
