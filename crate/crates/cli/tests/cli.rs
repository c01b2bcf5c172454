//! End-to-end runs of the `supercoinv` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use supercoinv_cli::cache::{Cache, CacheKey};

fn run_in(cache: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_supercoinv"));
    match cache {
        Some(dir) => cmd.arg("--cache-dir").arg(dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.args(args).env_remove("SUPERCOINV_CACHE").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let o = run_in(None, &["hilbert", "--m", "1", "--p", "1", "--n", "3", "--q-at", "1", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "z^2 + 6*z + 6\n");

    let o = run_in(None, &["artin", "--m", "4", "--p", "2", "--n", "3", "--count"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "192\n");

    let o = run_in(None, &["verify", "zabrocki", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    for r in &lines {
        assert_eq!(r["verdict"], "consistent", "{r}");
    }
    assert!(stdout(&o).contains("q + 1"));
}

#[test]
fn exit_statuses() {
    let code = |args: &[&str]| run_in(None, args).status.code();
    assert_eq!(code(&["group-info", "--m", "4", "--p", "3", "--n", "2"]), Some(2));
    assert_eq!(code(&["group-info", "--m", "4"]), Some(2));
    assert_eq!(code(&["no-such-command"]), Some(2));
    assert_eq!(code(&["verify", "no-such-suite"]), Some(2));
    assert_eq!(code(&["hilbert", "--m", "2", "--p", "1", "--n", "5"]), Some(3));
    assert_eq!(code(&["hilbert", "--m", "1", "--p", "1", "--n", "3", "--cell-budget", "10"]), Some(3));
    assert_eq!(code(&["harmonics", "--m", "1", "--p", "1", "--n", "3", "--bidegree", "3", "0"]), Some(0));
    assert_eq!(code(&["--help"]), Some(0));
}

#[test]
fn diagnostics_go_to_stderr() {
    let o = run_in(None, &["hilbert", "--m", "2", "--p", "1", "--n", "5"]);
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
}

#[test]
fn json_table_schema() {
    let o = run_in(None, &["hilbert", "--m", "3", "--p", "1", "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["group"], serde_json::json!({"m": 3, "p": 1, "n": 2}));
    assert_eq!(v["version"], 1);
    let mut by_k = [0u64; 3];
    for entry in v["dims"].as_array().unwrap() {
        let e = entry.as_array().unwrap();
        assert_eq!(e.len(), 3);
        assert!(e[2].as_u64().unwrap() > 0);
        by_k[e[1].as_u64().unwrap() as usize] += e[2].as_u64().unwrap();
    }
    assert_eq!(by_k, [18, 21, 4]);

    let o = run_in(None, &["hilbert", "--m", "3", "--p", "1", "--n", "2", "--q-at", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!([[0, "18"], [1, "21"], [2, "4"]]));
    let o = run_in(None, &["hilbert", "--m", "3", "--p", "1", "--n", "2", "--q-at", "1", "--z-at", "-1", "--format", "json"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["value"], "1");
}

#[test]
fn latex_row() {
    let o = run_in(None, &["hilbert", "--m", "2", "--p", "2", "--n", "2", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o);
    assert!(row.contains("z^2") && row.contains("(same)"), "{row}");
}

#[test]
fn cached_and_uncached_output_agree() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["hilbert", "--m", "2", "--p", "2", "--n", "3"][..],
        &["hilbert", "--m", "2", "--p", "2", "--n", "3", "--format", "latex"],
        &["groebner", "--m", "3", "--p", "3", "--n", "3", "--show-basis"],
    ] {
        let fresh = run_in(None, args);
        let first = run_in(Some(dir.path()), args);
        let second = run_in(Some(dir.path()), args);
        assert_eq!(fresh.status.code(), Some(0));
        assert_eq!(fresh.stdout, first.stdout, "{args:?}");
        assert_eq!(fresh.stdout, second.stdout, "{args:?}");
        assert!(stderr(&second).is_empty(), "{}", stderr(&second));
    }
    let cache = Cache::new(dir.path());
    for kind in ["sh-table", "closure-table"] {
        assert!(cache.path(&CacheKey::new(2, 2, 3, kind)).exists(), "{kind}");
    }
    assert!(cache.path(&CacheKey::new(3, 3, 3, "groebner")).exists());
}

#[test]
fn corrupted_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hilbert", "--m", "1", "--p", "1", "--n", "3"];
    let good = run_in(Some(dir.path()), &args);
    let path = Cache::new(dir.path()).path(&CacheKey::new(1, 1, 3, "sh-table"));
    let text = fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("[3,0,1]", "[3,0,7]", 1);
    assert_ne!(text, tampered, "{text}");
    fs::write(&path, tampered).unwrap();

    let again = run_in(Some(dir.path()), &args);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(again.stdout, good.stdout);
    assert!(stderr(&again).contains("checksum mismatch"), "{}", stderr(&again));
    assert_eq!(fs::read_to_string(&path).unwrap(), text, "entry rewritten");

    fs::write(&path, "not json").unwrap();
    let again = run_in(Some(dir.path()), &args);
    assert_eq!(again.stdout, good.stdout);
    assert!(stderr(&again).contains("ignoring cache entry"));
}

#[test]
fn wrong_cached_basis_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let wrong = vec!["x1^2".to_string(), "x2".to_string()];
    assert!(cache.put(&CacheKey::new(2, 1, 2, "groebner"), &wrong).unwrap());
    let o = run_in(Some(dir.path()), &["groebner", "--m", "2", "--p", "1", "--n", "2", "--verify-paper-basis"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("equals completion: no"));

    let o = run_in(None, &["groebner", "--m", "2", "--p", "1", "--n", "2", "--verify-paper-basis"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_output_is_deterministic() {
    for suite in ["exact", "artin-mpn", "no-dice"] {
        let args = ["verify", suite, "--m", "2", "--p", "2", "--n", "3"];
        let a = run_in(None, &args);
        let b = run_in(None, &args);
        assert_eq!(a.status.code(), Some(0), "{suite}: {}", stdout(&a));
        assert_eq!(a.stdout, b.stdout, "{suite}");
        for line in stdout(&a).lines() {
            let v: Value = serde_json::from_str(line).unwrap();
            for field in ["claim_id", "params", "expected", "computed", "verdict"] {
                assert!(v.get(field).is_some(), "{suite}: missing {field} in {line}");
            }
        }
    }
}

#[test]
fn harmonic_basis_is_printed() {
    let o = run_in(None, &["harmonics", "--m", "1", "--p", "1", "--n", "3", "--bidegree", "3", "0"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1);
    assert!(stderr(&o).contains("dimension 1"));
    let f = supercoinv::superpoly::SuperPoly::parse(lines[0], 3).unwrap();
    assert_eq!(f.num_terms(), 6);
}
