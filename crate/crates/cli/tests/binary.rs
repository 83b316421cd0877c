use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qserre-lab")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join(name);
    (dir, p)
}

fn read(p: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn shuffle_verify_passes() {
    let out = lab(&["shuffle", "verify", "--q", "2", "--K", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("nrel2"));
}

#[test]
fn leonard_build_reports_r_table() {
    let (_d, p) = tmp("l.json");
    let out = lab(&["leonard", "build", "--d", "3", "--q", "2", "--xi", "2", "--N", "12", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = read(&p);
    assert_eq!(v["schema"], "qserre-lab/1");
    assert_eq!(v["r"].as_array().unwrap().len(), 13);
    assert_eq!(v["r"][0], "1");
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["matrices"]["x30"]["data"].is_array());
}

#[test]
fn forbidden_xi_is_a_config_error() {
    let (_d, p) = tmp("l.json");
    let out = lab(&["leonard", "build", "--d", "3", "--q", "2", "--xi", "4", "--out", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("excluded"));
    assert_eq!(read(&p)["error"]["kind"], "config");
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(lab(&["leonard", "build", "--d", "3", "--q", "2.5", "--xi", "2"]).status.code(), Some(2));
    assert_eq!(lab(&["shuffle", "verify", "--q", "-1"]).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lab(&["drg", "build", "--rows", "3", "--cols", "3", "--p", "5"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_qserre-lab"))
        .args(["series", "--d", "1", "--q", "2", "--xi", "2"])
        .env("QSERRE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negative_rationals_are_accepted() {
    let out = lab(&["td", "--d", "3", "--q", "3/5", "--xi", "-3", "--K", "2", "--threads", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[0*,0]"));
}

#[test]
fn reports_are_byte_identical() {
    let (_d, a) = tmp("a.json");
    let b = a.with_file_name("b.json");
    for p in [&a, &b] {
        let out = lab(&["td", "--d", "3", "--q", "2", "--xi", "2", "--out", p.to_str().unwrap(), "--quiet"]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn drg_build_then_analyze() {
    let (_d, g) = tmp("g.json");
    let out = lab(&["drg", "build", "--family", "bilinear", "--rows", "2", "--cols", "2", "--p", "2", "--out", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let gj = read(&g);
    assert_eq!(gj["n"], 16);
    assert_eq!(gj["edges"].as_array().unwrap().len(), 16 * 9 / 2);
    let r = g.with_file_name("r.json");
    let out = lab(&["drg", "analyze", "--graph", g.to_str().unwrap(), "--base", "0", "--K", "2", "--exact", "--out", r.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = read(&r);
    assert_eq!(v["summary"]["module_dimension_sum"], 16);
    let m0 = &v["modules"][0];
    for key in ["dim", "endpoint", "checks", "conjecture_dims", "eigenvalue_tables"] {
        assert!(!m0[key].is_null(), "{key}");
    }
}

#[test]
fn graph_to_stdout_and_non_drg_rejected() {
    let out = lab(&["drg", "build", "--rows", "1", "--cols", "1", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["edges"], serde_json::json!([[0, 1]]));

    let (_d, g) = tmp("path.json");
    std::fs::write(&g, r#"{"n": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
    let out = lab(&["drg", "analyze", "--graph", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not distance-regular"));
}
