use std::path::{Path, PathBuf};

use normext_cli::{run_with, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

fn run(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("normext").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("normext-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const W_POLY: &str = "algebra w_poly\ngens x, y, z\nw = x*y*z + y*z*x + z*x*y - x*z*y - z*y*x - y*x*z ;\n";

#[test]
fn exit_codes() {
    let w = corpus("w_poly.alg");
    assert_eq!(run(&["verify", &w, "--omit", "1", "--p=1,1,1", "--bound", "6"]).0, EXIT_PASS);
    assert_eq!(run(&["verify", &w, "--omit", "1", "--p=1,2,1", "--bound", "6"]).0, EXIT_FAIL);
    // p_k must equal q_k: an input error, not a failed check
    assert_eq!(run(&["verify", &w, "--omit", "1", "--p=2,1,1"]).0, EXIT_INPUT);
    assert_eq!(run(&["verify", &w, "--p=1,1,1"]).0, EXIT_INPUT);
    assert_eq!(run(&["verify", &w, "--omit", "4"]).0, EXIT_INPUT);
    assert_eq!(run(&["verify", &w, "--omit", "1", "--p=1,1"]).0, EXIT_INPUT);
    assert_eq!(run(&["verify", "/nonexistent.alg", "--omit", "1"]).0, EXIT_INPUT);
    assert_eq!(run(&["no-such-verb"]).0, EXIT_INPUT);
    assert_eq!(run(&["hilbert", &w, "--engine", "fast"]).0, EXIT_INPUT);
}

#[test]
fn malformed_input_is_reported() {
    let dir = scratch("malformed");
    let bad = dir.join("bad.alg");
    std::fs::write(&bad, "algebra bad\ngens x, y\nw = x*y*q ;\n").unwrap();
    let (code, _, err) = run(&["check-superpotential", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn not_a_twisted_superpotential_fails_the_check() {
    let dir = scratch("untwisted");
    let f = dir.join("u.alg");
    std::fs::write(&f, "algebra u\ngens x, y, z\nw = x*y*z ;\n").unwrap();
    let (code, out, _) = run(&["check-superpotential", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["twisted"], false);
}

#[test]
fn reports_are_deterministic() {
    let s = corpus("sklyanin.alg");
    let a = run(&["solve-tuples", &s]);
    let b = run(&["solve-tuples", &s]);
    assert_eq!(a, b);
    let c = run(&["verify", &corpus("cubic_a.alg"), "--omit", "2", "--p=-1,1", "--format", "tsv"]);
    let d = run(&["verify", &corpus("cubic_a.alg"), "--omit", "2", "--p=-1,1", "--format", "tsv"]);
    assert_eq!(c.0, EXIT_PASS);
    assert_eq!(c, d);
    assert!(c.1.lines().any(|l| l == "D\t1,2,4,7,11,16,23,31,41,53,67"), "{}", c.1);
}

#[test]
fn engines_can_be_chosen() {
    let w = corpus("skew.alg");
    let la = run(&["hilbert", &w, "--engine", "la", "--format", "tsv"]);
    let gb = run(&["hilbert", &w, "--engine", "gb", "--format", "tsv"]);
    assert_eq!(la.0, EXIT_PASS);
    assert_eq!(la.1, gb.1);
}

#[test]
fn tables_need_sidecars() {
    let dir = scratch("sidecar");
    std::fs::write(dir.join("w_poly.alg"), W_POLY).unwrap();
    let (code, _, err) = run(&["tables", dir.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("missing sidecar"), "{err}");

    std::fs::write(dir.join("w_poly.toml"), "label = \"polynomial ring\"\n").unwrap();
    let (code, out, _) = run(&["tables", dir.to_str().unwrap(), "--format", "tsv"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out, "w_poly\t-\tno table row; families only\n");

    std::fs::write(dir.join("w_poly.toml"), "label = \"x\"\nunknown = 1\n").unwrap();
    assert_eq!(run(&["tables", dir.to_str().unwrap()]).0, EXIT_INPUT);
}

#[test]
fn missing_table_entry_fails() {
    let dir = scratch("entry");
    std::fs::write(dir.join("w_poly.alg"), W_POLY).unwrap();
    let sidecar = "label = \"p\"\nrow = \"A\"\n[[table]]\nk = 1\nentries = [\"1,1,1\", \"1,2,1\"]\nsource = \"derived\"\n";
    std::fs::write(dir.join("w_poly.toml"), sidecar).unwrap();
    let (code, out, _) = run(&["tables", dir.to_str().unwrap(), "--format", "tsv"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("w_poly\t1\t1,1,1\tcontained"), "{out}");
    assert!(out.contains("w_poly\t1\t1,2,1\tmissing"), "{out}");
}

#[test]
fn derive_recovers_w() {
    let (code, out, _) = run(&["derive", &corpus("s2_cubic.alg")]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["proportional"], true);
    assert_eq!(v["relations"].as_array().unwrap().len(), 2);
}

#[test]
fn assignments_change_the_specialization() {
    let s = corpus("s2_cubic.alg");
    let (code, out, _) = run(&["build-extension", &s, "--omit", "2", "--p=2,1/4", "--assign", "alpha:=-4", "--format", "tsv"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("omega\t"), "{out}");
    assert_eq!(run(&["build-extension", &s, "--omit", "2", "--p=2,1/4"]).0, EXIT_INPUT);
    assert_eq!(run(&["build-extension", &s, "--omit", "1", "--assign", "alpha:=0"]).0, EXIT_INPUT);
}

#[test]
fn zhang_identity_keeps_p() {
    let (code, out, _) = run(&["zhang", &corpus("w_poly.alg"), "--omit", "1", "--p=1,1,1", "--sigma=1,1,1;2,1,1", "--format", "tsv"]);
    assert_eq!(code, EXIT_PASS);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines, vec!["(1,1,1)\t(1,1,1)\ttrue", "(2,1,1)\t(4,1,1)\ttrue"]);
}
