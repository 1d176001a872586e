use std::path::Path;
use std::process::{Command, Output};

fn atl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atl")).args(args).env_remove("AFFINE_TL_CACHE_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = atl(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn enumerate_jones3() {
    let out = ok(&["enumerate", "--family", "jq", "--n", "3", "--q", "1", "--field", "Q(zeta 3)"]);
    assert!(out.lines().any(|l| l == "dimension 12"), "{out}");
    let out = ok(&["enumerate", "--family", "dnplus", "--n", "4", "--c", "1", "--q", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["dimension"], 72);
}

#[test]
fn bad_parity_is_a_usage_error() {
    let o = atl(&["enumerate", "--n", "4", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ParityMismatch"));
    assert_eq!(atl(&["enumerate", "--family", "dnJ", "--n", "3", "--f", "X"]).status.code(), Some(2));
}

#[test]
fn e1_squared() {
    let dir = tempfile::tempdir().unwrap();
    let e1 = write(dir.path(), "e1.json", &ok(&["element", "--n", "3", "--field", "Q(v)", "E1"]));
    let one = write(dir.path(), "one.json", &ok(&["element", "--n", "3", "--field", "Q(v)", "1"]));
    let sq: serde_json::Value = serde_json::from_str(&ok(&["multiply", "--n", "3", "--field", "Q(v)", &e1, &e1])).unwrap();
    let e: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&e1).unwrap()).unwrap();
    assert_eq!(sq["terms"].as_array().unwrap().len(), 1);
    assert_eq!(sq["terms"][0]["diagram"], e["terms"][0]["diagram"]);
    // delta = v + v^-1
    assert_eq!(sq["terms"][0]["coeff"], serde_json::json!({"num": ["1", "0", "1"], "den": ["0", "1"]}));
    let id: serde_json::Value = serde_json::from_str(&ok(&["multiply", "--n", "3", "--field", "Q(v)", &one, &e1])).unwrap();
    assert_eq!(id, e);
}

#[test]
fn mismatched_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &ok(&["element", "--n", "3", "E1"]));
    let b = write(dir.path(), "b.json", &ok(&["element", "--n", "4", "E1"]));
    let o = atl(&["multiply", "--n", "3", &a, &b]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("SizeMismatch"));
    let o = atl(&["multiply", "--n", "3", "--field", "Q", &a, &a]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("SpecMismatch"));
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(atl(&["multiply", "--n", "3", &bad, &a]).status.code(), Some(2));
    assert_eq!(atl(&["bogus"]).status.code(), Some(2));
}

#[test]
fn verify_n4_and_seed_reproducibility() {
    let out = ok(&["verify", "--family", "jq", "--n", "4"]);
    assert_eq!(out.lines().filter(|l| l.contains("PASS")).count(), 4, "{out}");
    let args = ["verify", "--n", "5", "--field", "Q(zeta 15)", "--samples", "60", "--seed", "9", "--format", "json"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn single_criterion() {
    let out = ok(&["verify", "--criterion", "5"]);
    assert!(out.starts_with("criterion  5 PASS"), "{out}");
    assert_eq!(atl(&["verify", "--criterion", "12"]).status.code(), Some(2));
}

#[test]
fn gram_of_dn_x2() {
    let out = ok(&["gram", "--family", "dnJ", "--n", "4", "--f", "X^2", "--field", "Q(v)"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("weight,root,dim,rank,radical,det"));
    assert_eq!(out.lines().count(), 5);
    // the radical-free t = 0 layer has full rank
    assert!(out.lines().any(|l| l.starts_with("\"(0,2)\",0,6,6,0,")), "{out}");
}

#[test]
fn ext_table_gf3() {
    let out = ok(&["ext-table", "--family", "jq", "--n", "3", "--field", "GF(3)", "--q", "1"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "family,n,field,q,lambda,mu,dim_ext,method_agreement");
    assert!(rows.contains(&"jq,3,GF(3^1),1,\"(3,1)\",\"(3,1)\",1,yes"));
    assert!(rows.contains(&"jq,3,GF(3^1),1,\"(1,1)\",\"(3,1)\",0,yes"));
    assert_eq!(ok(&["--jobs", "1", "ext-table", "--n", "3", "--field", "Q(zeta 3)"]), ok(&["--jobs", "3", "ext-table", "--n", "3", "--field", "Q(zeta 3)"]));
}

#[test]
fn blocks_of_self_extension() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &ok(&["module", "uniserial", "--n", "3", "--t", "1", "--alpha", "2"]));
    let out = ok(&["blocks", "--module", &m, "--n", "3", "--format", "csv"]);
    assert_eq!(out, "eigenvalue,dim,nilpotency\n2,6,2\n");
    let w = write(dir.path(), "w.json", &ok(&["module", "standard", "--n", "3", "--weight", "(1,1)"]));
    assert_eq!(ok(&["blocks", "--module", &w, "--n", "3", "--format", "csv"]), "eigenvalue,dim,nilpotency\n1,3,1\n");
}

#[test]
fn warm_and_cold_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        let o = Command::new(env!("CARGO_BIN_EXE_atl"))
            .args(["gram", "--family", "dnplus", "--n", "4", "--c", "1", "--format", "json"])
            .env("AFFINE_TL_CACHE_DIR", dir.path())
            .output()
            .unwrap();
        assert!(o.status.success());
        stdout(&o)
    };
    let cold = run();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    assert_eq!(cold, run());
    assert_eq!(cold, ok(&["gram", "--family", "dnplus", "--n", "4", "--c", "1", "--format", "json"]));
}
