//! End-to-end checks of the command-line interface: exit codes, JSON
//! payloads, determinism, and the result cache.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ptcob"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ptcob-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn chern_number_matches_table() {
    let out = run(&["chern-number", "p1xp2", "--beta", "fiber", "--n", "1", "--index", "0,1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "3");
    let out = run(&["chern-number", "p1xp2", "--beta", "fiber", "--n", "1", "--index", "2"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "9");
}

#[test]
fn partition_function_fit_and_symmetry() {
    let out = run(&[
        "partition-function",
        "p1xp2",
        "--beta",
        "fiber",
        "--index",
        "2",
        "--nmax",
        "12",
        "--fit",
        "--check-symmetry",
    ]);
    let doc = stdout_json(&out);
    let rec = &doc["records"][0];
    assert_eq!(rec["functional_equation"], true);
    assert_eq!(rec["fit"]["den"], serde_json::json!(["1", "4", "6", "4", "1"]));
    assert_eq!(
        rec["fit"]["num"],
        serde_json::json!(["0", "9", "36", "270", "36", "9"])
    );
    assert_eq!(rec["coefficients"][0], "9");
    assert_eq!(rec["coefficients"][2], "216");
}

#[test]
fn full_index_set_with_pole_report() {
    let out = run(&[
        "partition-function",
        "p1xp2",
        "--beta",
        "fiber",
        "--index",
        "all",
        "--nmax",
        "12",
        "--fit",
        "--check-poles",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["records"].as_array().unwrap().len(), 2);
    assert_eq!(doc["poles"]["same_support"], true);
    assert_eq!(doc["poles"]["same_multiplicities"], true);
}

#[test]
fn validation_failure_exits_nonzero() {
    let dir = scratch_dir("geom");
    let good = run(&["geometry", "validate", "p1xp2"]);
    let doc = stdout_json(&good);
    assert_eq!(doc["valid"], true);

    // corrupt one matched normal weight
    let text = std::fs::read_to_string(write_geometry(&dir)).unwrap();
    let mut g: serde_json::Value = serde_json::from_str(&text).unwrap();
    g["edges"][0]["nuprime"][0] = serde_json::json!([5, 7, 11]);
    let broken = dir.join("broken.json");
    std::fs::write(&broken, serde_json::to_string(&g).unwrap()).unwrap();
    let out = run(&["geometry", "validate", broken.to_str().unwrap()]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "validation");
}

fn write_geometry(dir: &std::path::Path) -> PathBuf {
    let out = run(&["geometry", "validate", "p1xp2"]);
    assert!(out.status.success());
    // dump the catalog geometry through the library, not the CLI
    let x = ptcob_core::toric::catalog("p1xp2").unwrap();
    let path = dir.join("p1xp2.json");
    std::fs::write(&path, x.to_json()).unwrap();
    path
}

#[test]
fn json_geometry_file_accepted() {
    let dir = scratch_dir("file");
    let path = write_geometry(&dir);
    let out = run(&[
        "chern-number",
        path.to_str().unwrap(),
        "--beta",
        "1,0",
        "--n",
        "1",
        "--index",
        "2",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["value"], "9");
}

#[test]
fn reruns_are_byte_identical() {
    let args = [
        "partition-function",
        "p1xp2",
        "--beta",
        "fiber",
        "--index",
        "2",
        "--nmax",
        "12",
        "--fit",
        "--seed",
        "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_hit_is_byte_identical_and_corruption_recovers() {
    let dir = scratch_dir("cache");
    let cache = dir.join("cache");
    let args = vec![
        "chern-number".to_string(),
        "p3".into(),
        "--beta".into(),
        "line".into(),
        "--n".into(),
        "2".into(),
        "--index".into(),
        "4".into(),
        "--cache".into(),
        cache.to_str().unwrap().to_string(),
    ];
    let argrefs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
    let first = run(&argrefs);
    assert!(first.status.success());
    let entries: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let second = run(&argrefs);
    assert_eq!(first.stdout, second.stdout);

    // corrupt the stored payload; the run must recompute, not reuse
    let path = entries[0].as_ref().unwrap().path();
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("value", "vandal")).unwrap();
    let third = run(&argrefs);
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn general_engine_gating() {
    let out = run(&["chern-number", "p1xp2", "--beta", "2,0", "--n", "2", "--index", "4"]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "engine-unavailable");

    let out = run(&[
        "chern-number",
        "p1xp2",
        "--beta",
        "2,0",
        "--n",
        "2",
        "--index",
        "4",
        "--enable-ptvertex",
    ]);
    let doc = stdout_json(&out);
    // leading coefficient of the multiplicity-two table: 9 * 27
    assert_eq!(doc["value"], "243");
}

#[test]
fn class_alias_sum_and_fixed_points() {
    let out = run(&[
        "fixed-points",
        "p1p1p1",
        "--beta",
        "e1+e2",
        "--n",
        "1",
        "--enable-ptvertex",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["count"], 8);
    assert_eq!(doc["engine"], "ptvertex");

    let out = run(&["fixed-points", "p3", "--beta", "line", "--n", "3"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["count"], 18);
    assert_eq!(doc["engine"], "deg1");
}

#[test]
fn csv_projection() {
    let out = run(&[
        "partition-function",
        "p1xp2",
        "--beta",
        "fiber",
        "--index",
        "2",
        "--nmax",
        "3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "geometry,beta,I,n,coefficient");
    assert!(lines[1].ends_with(",1,9"));
    assert!(lines[3].ends_with(",3,216"));
}
