use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

/// example_a(2) * example_a(2) through the join resolution. Not gating; run
/// with `cargo test --test stress -- --ignored`.
#[test]
#[ignore]
fn example_a_height_two_self_join() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a2.json");
    let bin = env!("CARGO_BIN_EXE_zpsmith");
    let st = Command::new(bin)
        .args(["corpus", "example_a", "2", "-o", a.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(bin)
        .args(["join-smith", a.to_str().unwrap(), a.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    println!("{}", v["timing"]);
    let j = &v["join"];
    assert_eq!(j["index"], 5);
    assert_eq!(j["index_mod_p"], 4);
    assert_eq!(j["moduli"], serde_json::json!(["2", "2", "2", "8"]));
}
