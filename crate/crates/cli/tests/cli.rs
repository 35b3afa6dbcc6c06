//! End-to-end CLI tests: golden outputs, determinism and the exit-code
//! contract. Golden files were frozen from hand-checked runs (the d = 2
//! matrix, its signed inverse and the diag(2,4) Brauer trace are small
//! enough to verify by eye).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_lj")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file exists")
}

fn assert_golden(args: &[&str], name: &str) {
    let out = run(args);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout, golden(name), "args: {:?}", args);
}

fn write_matrix_fixture() -> PathBuf {
    let path = std::env::temp_dir().join("lj_cli_test_matrix.json");
    std::fs::write(
        &path,
        r#"{"l": 7, "m": 1, "modulus": [0, 1], "rows": [[[2],[0]],[[0],[4]]]}"#,
    )
    .unwrap();
    path
}

#[test]
fn golden_outputs() {
    assert_golden(&["block", "--d", "2"], "block_d2.json");
    assert_golden(&["decomp", "--d", "2"], "decomp_d2.csv");
    assert_golden(&["decomp", "--d", "2", "--inverse"], "decomp_d2_inverse.csv");
    assert_golden(&["decomp", "--d", "2", "--format", "json"], "decomp_d2.json");
    assert_golden(&["scan", "--dmax", "2", "--format", "csv"], "scan_dmax2.csv");
    assert_golden(&["scan", "--dmax", "2"], "scan_dmax2.json");
    assert_golden(&["poset", "--e", "2", "--dims", "1,1"], "poset_e2.json");
    assert_golden(&["poset", "--e", "2", "--dims", "1,1", "--dot"], "poset_e2.dot");

    let matrix = write_matrix_fixture();
    let out = run(&["brauer", "trace", "--matrix", matrix.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("brauer_diag24_f7.json"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["block", "--d", "3"],
        vec!["decomp", "--d", "3", "--inverse"],
        vec!["scan", "--dmax", "4", "--format", "csv"],
        vec!["poset", "--e", "3", "--dims", "1,1,1"],
        vec!["kl", "--d", "3", "--u", "1,2,3", "--w", "0,2,4"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success(), "{:?}", args);
        assert_eq!(first.stdout, second.stdout, "args: {:?}", args);
    }
}

#[test]
fn kl_command_values() {
    // Diagonal pair: the constant polynomial 1.
    let out = run(&["kl", "--d", "4", "--u", "2,1,3,4", "--w", "2,1,3,4"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "[1]");
    // The S_4 landmark pair 1 + q: u = s_2 = (1,3,2,4),
    // w = s_2 s_1 s_3 s_2 = (3,4,1,2).
    let out = run(&["kl", "--d", "4", "--u", "1,3,2,4", "--w", "3,4,1,2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "[1,1]");
    // Incomparable pair: zero polynomial.
    let out = run(&["kl", "--d", "3", "--u", "0,2,4", "--w", "1,3,2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "[]");
}

#[test]
fn kl_cache_file_roundtrip() {
    let cache = std::env::temp_dir().join("lj_cli_test_cache.json");
    let _ = std::fs::remove_file(&cache);
    let args = [
        "kl", "--d", "3", "--u", "1,2,3", "--w", "0,2,4",
        "--cache", cache.to_str().unwrap(),
    ];
    let first = run(&args);
    assert!(first.status.success());
    assert!(cache.exists());
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.contains("lj-kl-cache-v1"));
    // Second run consumes the cache and prints the same thing.
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn arith_commands() {
    let out = run(&["arith", "ainv", "--d", "2", "--t", "1", "--q", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "8");
    let out = run(&["arith", "ainv", "--d", "6", "--t", "3", "--q", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "14");

    let out = run(&["arith", "screen", "--d", "6", "--q", "2", "--l", "3", "--kind", "other"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "epsilon=2 verdict=undecided"
    );
    let out = run(&["arith", "screen", "--d", "2", "--q", "5", "--l", "3", "--kind", "other"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "epsilon=2 verdict=effective"
    );
    let out = run(&["arith", "screen", "--d", "4", "--q", "3", "--l", "5", "--kind", "non-elliptic"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "epsilon=4 verdict=zero"
    );
}

#[test]
fn exit_code_contract() {
    // Usage / domain errors: 2.
    let out = run(&["block", "--d", "3", "--epsilon", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["arith", "ainv", "--d", "6", "--t", "4", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["arith", "screen", "--d", "2", "--q", "5", "--l", "3", "--kind", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["kl", "--d", "3", "--u", "1,2", "--w", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));

    // Resource caps: 3.
    let out = run(&["scan", "--dmax", "99"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["kl", "--d", "2", "--u", "1,2", "--w", "-3,6", "--max-length", "2"]);
    assert_eq!(out.status.code(), Some(3));

    // Success: 0.
    let out = run(&["scan", "--dmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn kl_source_matches_closed_form_for_small_d() {
    for d in ["2", "3"] {
        let closed = run(&["decomp", "--d", d, "--format", "json"]);
        let kl = run(&["decomp", "--d", d, "--source", "kl", "--format", "json"]);
        assert!(kl.status.success());
        assert_eq!(closed.stdout, kl.stdout, "d = {}", d);
    }
    // No shipped bridge beyond d = 3: capability error, exit 2.
    let out = run(&["decomp", "--d", "4", "--source", "kl"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_kl_source_small() {
    let closed = run(&["scan", "--dmax", "3"]);
    let kl = run(&["scan", "--dmax", "3", "--source", "kl"]);
    assert!(kl.status.success());
    assert_eq!(closed.stdout, kl.stdout);
}
