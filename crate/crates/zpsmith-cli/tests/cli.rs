use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;
use zpsmith::corpus::random_zp_complex;
use zpsmith_cli::files::{parse_any, to_json, AnyComplex, ComplexFile};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zpsmith"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn error_line(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.trim().lines().count(), 1, "{text}");
    serde_json::from_str(text.trim()).expect("json error line")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn corpus(dir: &TempDir, name: &str, params: &[&str]) -> PathBuf {
    let out = path(dir, &format!("{name}{}.json", params.join("_")));
    let mut args = vec!["corpus", name];
    args.extend_from_slice(params);
    args.extend_from_slice(&["-o", s(&out)]);
    run_ok(&args);
    out
}

fn run_ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn example_a_smith_report() {
    let dir = TempDir::new().unwrap();
    let a = corpus(&dir, "example_a", &["1"]);
    let r = ok_json(&["smith", s(&a)]);
    assert_eq!(r["index"], 3);
    assert_eq!(r["index_mod_p"], 2);
    assert_eq!(r["moduli"], serde_json::json!(["2", "4"]));
    for c in r["classes"].as_array().unwrap() {
        if !c["certificate"].is_null() {
            assert_eq!(c["certificate"]["verified"], true);
        }
    }
    assert!(r["timing"]["elapsed_ms"].is_number());
}

#[test]
fn smith_with_mod_and_max_dim() {
    let dir = TempDir::new().unwrap();
    let a = corpus(&dir, "example_a", &["1"]);
    let r = ok_json(&["smith", s(&a), "--mod", "2", "--no-certificates"]);
    assert_eq!(r["index_mod_pm"]["index"], 3);
    let r = ok_json(&["smith", s(&a), "--max-dim", "1"]);
    assert!(r["index"].is_null());
    assert_eq!(r["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn empty_complex_has_index_zero() {
    let dir = TempDir::new().unwrap();
    let e = path(&dir, "empty.json");
    std::fs::write(&e, r#"{"p":3,"vertices":[],"action":[],"facets":[]}"#).unwrap();
    assert_eq!(ok_json(&["smith", s(&e)])["index"], 0);
}

#[test]
fn certificate_command() {
    let dir = TempDir::new().unwrap();
    let a = corpus(&dir, "example_a", &["1"]);
    let r = ok_json(&["certificate", s(&a), "--dim", "2"]);
    assert_eq!(r["modulus"], "4");
    assert_eq!(r["certificate"]["verified"], true);
    let r = ok_json(&["certificate", s(&a), "--dim", "2", "--mod", "8"]);
    assert_eq!(r["certificate"]["verified"], true);
    let r = ok_json(&["certificate", s(&a), "--dim", "2", "--mod", "2"]);
    assert_eq!(r["vanishes_mod_modulus"], true);
}

#[test]
fn join_and_deleted_outputs_are_readable() {
    let dir = TempDir::new().unwrap();
    let sp = corpus(&dir, "sphere", &["1"]);
    let j = path(&dir, "j.json");
    run_ok(&["join", s(&sp), s(&sp), "-o", s(&j)]);
    assert_eq!(ok_json(&["smith", s(&j)])["index"], 4);
    let text = std::fs::read_to_string(&j).unwrap();
    assert!(text.contains("\"1:0\"") && text.contains("\"2:0\""));

    let k5 = corpus(&dir, "skeleton", &["1"]);
    let dj = path(&dir, "dj.json");
    run_ok(&["deleted", s(&k5), "--join", "-o", s(&dj)]);
    let r = ok_json(&["smith", s(&dj), "--no-certificates"]);
    assert_eq!(r["classes"][3]["minimal_modulus_exponent"], 1);
    let dp = path(&dir, "dp.json");
    run_ok(&["deleted", s(&k5), "--product", "-o", s(&dp)]);
    assert_eq!(ok_json(&["validate", s(&dp)])["kind"], "chain-complex");
    let r = ok_json(&["smith", s(&dp), "--no-certificates"]);
    assert_eq!(r["classes"][2]["minimal_modulus_exponent"], 1);
}

#[test]
fn join_smith_direct_agrees() {
    let dir = TempDir::new().unwrap();
    let a = corpus(&dir, "sigma", &["2"]);
    let b = corpus(&dir, "example_a", &["1"]);
    let r = ok_json(&["join-smith", s(&a), s(&b), "--direct"]);
    assert_eq!(r["direct"]["agrees"], true);
    assert_eq!(r["join"]["moduli"], serde_json::json!(["2", "2", "4"]));
}

#[test]
fn embed_verdict_command() {
    let dir = TempDir::new().unwrap();
    let k5 = corpus(&dir, "skeleton", &["1"]);
    let r = ok_json(&["embed-verdict", s(&k5), s(&k5), "--product-check"]);
    assert_eq!(r["outcome"], "DoesNotEmbed");
    assert_eq!(r["clause"], "2.b");
    assert_eq!(r["product_check"][0]["agrees"], true);
}

#[test]
fn snf_command() {
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "m.txt");
    std::fs::write(&m, "2 4 4\n-6 6 12\n10 -4 -16\n").unwrap();
    let r = ok_json(&["snf", s(&m), "--full"]);
    assert_eq!(r["invariant_factors"], serde_json::json!(["2", "6", "12"]));
    assert!(r["u"].is_array());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = run(&["smith", s(&path(&dir, "missing.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "io");

    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, "{").unwrap();
    let out = run(&["validate", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_line(&out)["error"], "parse");

    let fixed = path(&dir, "fixed.json");
    std::fs::write(
        &fixed,
        r#"{"p":2,"vertices":["a","b"],"action":[1,0],"facets":[["a","b"]]}"#,
    )
    .unwrap();
    let out = run(&["smith", s(&fixed)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_line(&out)["error"], "domain");

    let a = corpus(&dir, "example_a", &["1"]);
    let out = run(&["--memory-cap", "2K", "smith", s(&a)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_line(&out)["error"], "memory-cap");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complex_files_round_trip(p in prop_oneof![Just(2u64), Just(3)], dim in 0u32..=2, facets in 0usize..8, seed in any::<u64>()) {
        let z = random_zp_complex(p, 3, dim, facets, seed);
        let names: Vec<String> = (0..z.complex.vertex_count()).map(|v| format!("v{v}")).collect();
        let text = to_json(&ComplexFile::from_zp(&names, &z));
        match parse_any(&text).unwrap() {
            AnyComplex::Simplicial(l) => {
                prop_assert_eq!(l.zp.unwrap(), z);
                prop_assert_eq!(l.names, names);
            }
            AnyComplex::Chain(_) => prop_assert!(false, "wrong kind"),
        }
    }
}
