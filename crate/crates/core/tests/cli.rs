//! Runs the installed binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

use schmidt_norms::qops::{max_entangled, save_operator, swap_operator};
use schmidt_norms::states::werner;
use schmidt_norms::{BipartiteDims, HermitianOperator};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schmidt-norms")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("schmidt-norms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_op(name: &str, op: &HermitianOperator, n: usize, m: usize) -> String {
    let path = scratch(name);
    save_operator(&path, op, BipartiteDims::new(n, m).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("one JSON document")
}

#[test]
fn norm_reports_brackets() {
    let e = write_op("e.json", &max_entangled(2), 2, 2);
    let out = bin(&["--format", "json", "norm", "--input", &e, "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "norm");
    assert!((v["results"]["lower"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert!((v["results"]["upper"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(v["solver"]["status"], "Optimal");

    let id = write_op("id.json", &HermitianOperator::identity(6), 3, 2);
    let v = json(&bin(&["--format", "json", "norm", "--input", &id]));
    assert!((v["results"]["lower"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((v["results"]["upper"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let w = write_op("w.json", &werner(3, 0.5).unwrap(), 3, 3);
    let v = json(&bin(&["--format", "json", "norm", "--input", &w, "--maps", "both"]));
    assert!((v["results"]["upper"].as_f64().unwrap() - 0.1333).abs() < 1e-3);
}

#[test]
fn norm_rejects_bad_input() {
    let s = write_op("swap.json", &swap_operator(2), 2, 2);
    assert_eq!(bin(&["norm", "--input", &s]).status.code(), Some(3));
    let junk = scratch("junk.json");
    std::fs::write(&junk, "not json").unwrap();
    assert_eq!(bin(&["norm", "--input", junk.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(bin(&["norm"]).status.code(), Some(2));
}

#[test]
fn check_bp_verdicts() {
    let id = write_op("bp-id.json", &HermitianOperator::identity(4), 2, 2);
    assert_eq!(bin(&["check-bp", "--input", &id, "--k", "1"]).status.code(), Some(0));
    let s = write_op("bp-swap.json", &swap_operator(2), 2, 2);
    assert_eq!(bin(&["check-bp", "--input", &s, "--k", "1"]).status.code(), Some(0));
    let out = bin(&["--format", "json", "check-bp", "--input", &s, "--k", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["results"]["verdict"], "CertifiedNo");
    assert!((v["results"]["witness_value"].as_f64().unwrap() + 1.0).abs() < 1e-8);
    let junk = scratch("bp-junk.json");
    std::fs::write(&junk, "{").unwrap();
    assert_eq!(bin(&["check-bp", "--input", junk.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn werner_table_rows() {
    let out = bin(&["werner-table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "n,alpha,exact,transpose,reduction\n\
         2,0.5,0.3333,0.3333,0.3333\n\
         2,-0.5,0.3000,0.3000,0.3000\n\
         3,0.5,0.1333,0.1333,0.2000\n\
         3,-0.5,0.1429,0.1429,0.1429\n"
    );
}

#[test]
fn bures_dist_is_deterministic() {
    let a = scratch("b1.csv");
    let b = scratch("b2.csv");
    for path in [&a, &b] {
        let out = bin(&["bures-dist", "--dim", "4", "--samples", "25", "--seed", "3", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().count(), 26);
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(v[3] - 1e-7 <= v[5] && v[5] <= v[4] + 1e-7);
    }
    assert_eq!(bin(&["bures-dist", "--dim", "4", "--samples", "0"]).status.code(), Some(2));
}

#[test]
fn proj_undistill_and_brandao() {
    let v = json(&bin(&["--format", "json", "proj", "--n", "3", "--r", "1"]));
    assert!((v["results"]["s1_exact"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((v["results"]["s1_sdp_upper"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-4);
    assert_eq!(bin(&["proj", "--n", "3", "--r", "4"]).status.code(), Some(5));

    assert_eq!(bin(&["undistill", "--n", "4", "--r", "1", "--alpha", "0.5"]).status.code(), Some(0));
    assert_eq!(bin(&["undistill", "--n", "4", "--r", "1", "--alpha", "0.6"]).status.code(), Some(1));
    assert_eq!(bin(&["undistill", "--n", "3", "--r", "1", "--alpha", "-0.5"]).status.code(), Some(0));

    let args = ["brandao", "--n", "3", "--rank", "3", "--trials", "4", "--seed", "9"];
    let (x, y) = (bin(&args), bin(&args));
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
    for line in String::from_utf8(x.stdout).unwrap().lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(v[2] >= 1.0 / 3.0 - 1e-6);
    }
}
