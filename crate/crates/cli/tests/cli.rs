use std::path::{Path, PathBuf};
use std::process::Command;

use anewdsc::isolate::Config;
use anewdsc::Dyadic;
use anewdsc_cli::format::{parse_document, parse_interval, parse_polynomial, read_document};
use anewdsc_cli::verify::verify_all;
use anewdsc_reference::rat;
use serde_json::Value;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus_polynomials() -> Vec<anewdsc_cli::format::Polynomial> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(corpus()).unwrap() {
        out.extend(read_document(&e.unwrap().path()).unwrap().polynomials);
    }
    out
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_anewdsc")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn render_then_parse_is_identity() {
    for p in corpus_polynomials() {
        let q = parse_polynomial(&p.to_json()).unwrap();
        assert_eq!(p, q);
        let (a, b) = (p.to_oracle().unwrap(), q.to_oracle().unwrap());
        for l in [-4, 1, 8, 64, 300] {
            assert_eq!(a.coeffs(l), b.coeffs(l), "{} at quality {l}", p.label());
        }
    }
}

#[test]
fn corpus_verifies() {
    let ps = corpus_polynomials();
    assert!(ps.len() >= 15);
    for v in verify_all(&ps, &Config::default()) {
        assert!(v.pass, "{}: {:?}", v.name, v.problems);
    }
}

#[test]
fn isolate_and_verify_sqrt_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", r#"{"coeffs":[-2,0,1]}"#);
    let output = dir.path().join("out.json");
    let (code, _, err) = bin(&["isolate", "--input", &input, "--output", output.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(v["intervals"].as_array().unwrap().len(), 2);
    for key in ["tree_size", "quadratic_steps", "linear_steps", "max_level", "max_precision_bits", "wall_time"] {
        assert!(v["stats"].get(key).is_some(), "missing {key}");
    }
    let (code, out, _) = bin(&["verify", "--input", &input]);
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS"));
}

#[test]
fn refine_to_100_bits() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", r#"{"coeffs":[-2,0,1]}"#);
    let (code, out, err) = bin(&["refine", "--input", &input, "--kappa", "100"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let ivs = v["intervals"].as_array().unwrap();
    assert_eq!(ivs.len(), 2);
    let p = parse_document(r#"{"coeffs":[-2,0,1]}"#).unwrap().polynomials[0].to_exact();
    for i in ivs {
        let j = parse_interval(i).unwrap();
        assert!(j.width() < Dyadic::pow2(-100));
        assert_eq!(p.sign_at(&rat(&j.a)) * p.sign_at(&rat(&j.b)), -1);
    }
    // the isolate report is itself a refine input
    let (_, iso, _) = bin(&["isolate", "--input", &input]);
    let again = write(dir.path(), "iso.json", &iso);
    let (code, out, _) = bin(&["refine", "--input", &again, "--kappa", "40"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v.get("isolate_stats").is_none());
    assert_eq!(v["intervals"].as_array().unwrap().len(), 2);
}

#[test]
fn bench_mignotte() {
    let (code, out, err) = bin(&["bench", "mignotte", "--n", "16", "--a", "16"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["stats"]["tree_size"].as_u64().unwrap() > 0);
    assert_eq!(v["intervals"].as_array().unwrap().len(), 4);
    let (code, out, _) = bin(&["bench", "--family", "random-dense", "--n", "8", "--tau", "16", "--seed", "1"]);
    assert_eq!(code, 0);
    let (_, again, _) = bin(&["bench", "--family", "random-dense", "--n", "8", "--tau", "16", "--seed", "1"]);
    let (a, b): (Value, Value) = (serde_json::from_str(&out).unwrap(), serde_json::from_str(&again).unwrap());
    assert_eq!(a["polynomial"], b["polynomial"]);
    assert_eq!(a["polynomial"]["coeffs"].as_array().unwrap().len(), 9);
}

#[test]
fn diagnostics_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let linear = write(dir.path(), "l.json", r#"{"coeffs":[1,1]}"#);
    let (code, _, err) = bin(&["isolate", "--input", &linear]);
    assert_eq!(code, 2);
    assert!(err.contains("degree 1"), "{err}");
    let (code, _, err) = bin(&["bench", "legendre", "--n", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown generator"), "{err}");
    let (code, _, _) = bin(&["refine", "--input", &linear]);
    assert_eq!(code, 2, "refine needs --kappa");
    let square = write(dir.path(), "s.json", r#"{"coeffs":[4,0,-4,0,1]}"#);
    let (code, _, err) = bin(&["--iteration-cap", "500", "--precision-cap", "4096", "isolate", "--input", &square]);
    assert_ne!(code, 0, "{err}");
    let (code, out, err) = bin(&["isolate", "--square-free", "--input", &square]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["intervals"].as_array().unwrap().len(), 2);
}

#[test]
fn caps_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "m.json", r#"{"degree":16, "terms":[[16,1],[2,-512],[1,64],[0,-2]]}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_anewdsc"))
        .args(["isolate", "--bisection-only", "--input", &input])
        .env("ANEWDSC_ITERATION_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("iteration cap of 10"));
}
