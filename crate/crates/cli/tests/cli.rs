use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use trigonal_core::curve::pack::compute_checksums;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn trigonal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigonal"))
        .args(args)
        .env("TRIGONAL_DATA_DIR", data_dir())
        .output()
        .expect("run trigonal")
}

fn trigonal_with_data(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trigonal"))
        .args(args)
        .env("TRIGONAL_DATA_DIR", dir)
        .output()
        .expect("run trigonal")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

/// Copy of the shipped data with one file edited and checksums refreshed.
fn corrupted_copy(tag: &str, file: &str, from: &str, to: &str) -> PathBuf {
    let root = std::env::temp_dir().join(format!("trigonal-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&root);
    for entry in std::fs::read_dir(data_dir()).unwrap() {
        let src = entry.unwrap().path();
        let dst = root.join(src.file_name().unwrap());
        std::fs::create_dir_all(&dst).unwrap();
        for f in std::fs::read_dir(&src).unwrap() {
            let f = f.unwrap().path();
            std::fs::copy(&f, dst.join(f.file_name().unwrap())).unwrap();
        }
    }
    let dir = root.join("3_7");
    let path = dir.join(file);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains(from), "{file} has no '{from}'");
    std::fs::write(&path, text.replacen(from, to, 1)).unwrap();
    std::fs::write(dir.join("CHECKSUMS"), compute_checksums(&dir).unwrap()).unwrap();
    root
}

#[test]
fn gaps_text() {
    let o = trigonal(&["gaps", "--n", "3", "--s", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1 2 4 5 7 10 13");
    let o = trigonal(&["gaps", "3,7"]);
    assert_eq!(stdout(&o).trim(), "1 2 4 5 8 11");
}

#[test]
fn sw_json_summary() {
    let o = trigonal(&["sw", "--n", "3", "--s", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["genus"], 6);
    assert_eq!(v["weight"], 16);
    assert_eq!(v["monomials"], 32);
    assert_eq!(v["data"]["status"], "pass");

    let v = json(&trigonal(&["sw", "3,8", "--format", "json"]));
    assert_eq!(v["weight"], 21);
    let diffs = v["data"]["differences"].as_array().unwrap();
    assert_eq!(diffs.len(), 1);
    assert_eq!(diffs[0]["recorded"], true);
}

#[test]
fn weights_json() {
    let v = json(&trigonal(&["weights", "--curve", "3,8", "--format", "json"]));
    assert_eq!(v["sigma_weight"], 21);
    assert_eq!(v["sigma_parity"], "odd");
    assert_eq!(v["u_weights"], serde_json::json!([13, 10, 7, 5, 4, 2, 1]));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["gaps", "--n", "3", "--s", "9"],
        vec!["gaps", "--n", "3"],
        vec!["gaps", "3;7"],
        vec!["verify", "--curve", "3,7", "--suite", "nonsense"],
        vec!["candidates", "--k", "17"],
        vec!["resultant", "--i", "3", "--j", "4"],
        vec!["addition", "--curve", "3,10"],
        vec!["invert", "--precision", "8"],
    ] {
        let o = trigonal(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = trigonal(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn q_relation_suite_passes() {
    let o = trigonal(&["verify", "--curve", "3,7", "--suite", "q-relations", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = json(&trigonal(&["verify", "--curve", "3,7", "--suite", "q-relations", "--seed", "1", "--format", "json"]));
    assert_eq!(v["suite"], "q-relations");
    assert_eq!(v["seed"], 1);
    let rels = v["relations"].as_array().unwrap();
    assert!(!rels.is_empty());
    for r in rels {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["residual"], "0");
    }
}

#[test]
fn failing_suite_exits_1() {
    let o = trigonal(&["verify", "--curve", "3,7", "--suite", "reduced"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn reports_are_byte_identical() {
    let args = ["hirota", "3,8", "--points", "4", "--seed", "9", "--format", "json"];
    let a = trigonal(&args);
    let b = trigonal(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = trigonal(&["hirota", "3,8", "--points", "4", "--seed", "10", "--format", "json"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn inversion_report() {
    let v = json(&trigonal(&["invert", "--curve", "3,7", "--points", "2", "--seed", "7", "--format", "json"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["digits"], 50);
    assert_eq!(v["tolerance"], "1e-25");
    assert_eq!(v["samples"].as_array().unwrap().len(), 2);
    assert_eq!(v["samples"][0]["points"].as_array().unwrap().len(), 6);
}

#[test]
fn resultant_and_reduce() {
    let v = json(&trigonal(&["resultant", "--i", "1", "--j", "2", "--format", "json"]));
    assert_eq!(v["terms"], 40);
    assert_eq!(v["z_degree"], 6);
    assert_eq!(v["ratio_to_shipped"], "1");
    let o = trigonal(&["reduce", "3,7", "--points", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("pass")).count(), 6);
}

#[test]
fn rho_sign_option() {
    let o = trigonal(&["rho", "3,7"]);
    assert_eq!(o.status.code(), Some(0));
    let o = trigonal(&["rho", "3,7", "--sign", "minus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn candidates_contain_sw() {
    let v = json(&trigonal(&["candidates", "--k", "16", "--format", "json"]));
    assert_eq!(v["contains_sw"], true);
    assert_eq!(v["count"], v["monomials"].as_array().unwrap().len());
}

#[test]
fn validate_data_flags_bad_formula() {
    let o = trigonal(&["validate-data"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let dir = corrupted_copy("inhomogeneous", "q4.frm", "Q[6,6,6,6] = - 3*p[5,5] ;", "Q[6,6,6,6] = - 3*p[5,5] + p[6,6] ;");
    let o = trigonal_with_data(&dir, &["validate-data"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = trigonal_with_data(&dir, &["verify", "--suite", "q4"]);
    assert_eq!(o.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn corrupt_fundamental_polynomial_exits_3() {
    let dir = corrupted_copy("badf", "differentials.frm", "[F] ", "[F] x^4*y*z^3 + ");
    let o = trigonal_with_data(&dir, &["rho", "3,7"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let _ = std::fs::remove_dir_all(dir);
}
