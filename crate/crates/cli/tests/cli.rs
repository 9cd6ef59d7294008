use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gbs_core::fixtures::*;
use gbs_core::moves::{apply_expansion, Deformation, Move};
use gbs_core::{End, Graph, Side, VertexId};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn gbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbs")).args(args).env_remove("GBS_MAX_STATES").output().unwrap()
}

fn gbs_files(cmd: &str, files: &[&Path], extra: &[&str]) -> Output {
    let mut args = vec![cmd.to_string()];
    args.extend(files.iter().map(|p| p.display().to_string()));
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    gbs(&refs)
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn iso_exit_codes() {
    let out = gbs_files("iso", &[&data("h4.json"), &data("h9.json")], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"verdict\":\"Isomorphic\"}\n");

    let out = gbs_files("iso", &[&data("bs23.json"), &data("bs25.json")], &[]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verdict"], "NotIsomorphic");

    let out = gbs_files("iso", &[&data("bs24.json"), &data("bs23.json")], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "IntegralModuli");
}

#[test]
fn validate_reports_errors() {
    let out = gbs_files("validate", &[&data("broken.json")], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "ZeroIndex");

    let out = gbs_files("validate", &[&data("h4.json")], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["betti"], 1);

    let dir = tempfile::tempdir().unwrap();
    let junk = write(&dir, "junk.json", "{\"vertices\": [");
    assert_eq!(stdout_json(&gbs_files("validate", &[&junk], &[]))["error"], "MalformedInput");
    let missing = dir.path().join("missing.json");
    assert_eq!(stdout_json(&gbs_files("validate", &[&missing], &[]))["error"], "Io");
}

#[test]
fn fullreduce_and_invariants() {
    let out = gbs_files("fullreduce", &[&data("bs_5_30_unreduced.json")], &["--depth", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["exhaustive"], true);
    let g = gbs_core::parse_graph(&v["graph"].to_string()).unwrap();
    assert!(gbs_core::are_equivalent(&g, &loop_graph(5, 30)));
    let d = Deformation::from_json(&v["deformation"].to_string()).unwrap();
    assert_eq!(d.replay(&bs_5_30_unreduced()).unwrap(), g);

    let v = stdout_json(&gbs_files("invariants", &[&data("bs23.json")], &[]));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["betti", "integral_moduli", "orientation", "primes", "signed_generators", "unsigned_generators"]
    );
    assert_eq!(v["unsigned_generators"][0], "3/2");
}

#[test]
fn closure_formats_and_budget() {
    let v = stdout_json(&gbs_files("closure", &[&data("h4.json")], &[]));
    assert_eq!(v["states"].as_array().unwrap().len(), 3);

    let out = gbs_files("closure", &[&data("h4.json")], &["--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph closure {"));
    assert_eq!(dot.matches("shape=").count(), 3);

    let out = gbs_files("closure", &[&data("h4.json")], &["--max-states", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], "StateBudgetExceeded");

    let out = Command::new(env!("CARGO_BIN_EXE_gbs"))
        .args(["closure", data("h4.json").to_str().unwrap()])
        .env("GBS_MAX_STATES", "2")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["error"], "StateBudgetExceeded");
}

#[test]
fn coset_reports_bound() {
    let v = stdout_json(&gbs_files("coset", &[&data("h4.json")], &["--bound", "5"]));
    assert_eq!(v["bound"], 5);
    let f = v["ends"].as_array().unwrap().iter().find(|e| e["index"] == 4).unwrap();
    assert_eq!(f["coset"], serde_json::json!([4, 6, 9]));
}

#[test]
fn normalize_expansion_then_slide() {
    let g = h_graph(4);
    let (g1, e) = apply_expansion(&g, &VertexId::new("w"), &[End::new("f", Side::To)], 1, 1).unwrap();
    let s = Move::Slide { moving_end: End::new("f", Side::From), over: End::new("e", Side::From) };
    let _: Graph = s.apply(&g1).unwrap();
    let d: Deformation = [e, s].into_iter().collect();

    let dir = tempfile::tempdir().unwrap();
    let gp = write(&dir, "g.json", &g.to_json());
    let dp = write(&dir, "d.json", &d.to_json());
    let out = gbs_files("normalize", &[&gp, &dp], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["pattern"], "S^1 E^1");
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["closure", "h4.json"],
        vec!["fullreduce", "bs_5_30_unreduced.json"],
        vec!["invariants", "h9.json"],
    ] {
        let path = data(args[1]);
        let a = gbs_files(args[0], &[&path], &[]);
        let b = gbs_files(args[0], &[&path], &[]);
        assert_eq!(a.stdout, b.stdout);
    }
}
