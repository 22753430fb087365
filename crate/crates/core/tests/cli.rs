use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use cusp_frobenius::cli::run;
use cusp_frobenius::wdvv::Potential;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cusp-frobenius").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cusp-frobenius"))
        .args(args)
        .env("CUSP_FROBENIUS_CACHE_DIR", cache)
        .output()
        .unwrap()
}

#[test]
fn info_reports_invariants() {
    let (code, out, _) = call(&["info", "2", "3", "7"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mu"], 11);
    assert_eq!(v["chi"], "-1/42");
    assert_eq!(v["exponents"].as_array().unwrap().len(), 11);
}

#[test]
fn reordering_warns() {
    let (code, out, err) = call(&["info", "7", "3", "2"]);
    assert_eq!(code, 0);
    assert!(err.contains("reordered to (2,3,7)"), "{err}");
    assert!(out.contains("\"mu\": 11"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["info", "0", "1", "2"],
        vec!["info", "2", "3"],
        vec!["info", "2", "3", "x"],
        vec!["frobnicate", "2", "2", "2"],
        vec!["verify", "everything", "2", "2", "2"],
        vec!["residue", "2", "2", "2", "--smu", "1/0"],
        vec!["potential", "2", "2", "2", "--q-order"],
        vec![],
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(call(&["--help"]).0, 0);
    assert_eq!(call(&["--version"]).0, 0);
    assert_eq!(call(&["verify", "--help"]).0, 0);
}

#[test]
fn module_errors_exit_1() {
    let (code, _, err) = call(&["weyl", "3", "3", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("singular Cartan matrix (chi=0)"), "{err}");

    let (code, _, err) = call(&["potential", "2", "3", "6", "--no-cache"]);
    assert_eq!(code, 1);
    assert!(err.contains("chi zero"), "{err}");

    let (code, _, err) = call(&["potential", "2", "3", "7", "--t-degree", "4", "--no-cache"]);
    assert_eq!(code, 1);
    assert!(err.contains("truncation too small"), "{err}");
}

#[test]
fn failed_verification_exits_1() {
    let (code, out, _) = call(&["verify", "wdvv", "2", "3", "7", "--q-order", "1", "--t-degree", "5", "--no-cache"]);
    assert_eq!(code, 1);
    assert!(out.contains("[FAIL]"), "{out}");
}

#[test]
fn verify_passes_on_small_triplet() {
    let (code, out, _) = call(&["verify", "all", "2", "2", "2", "--q-order", "2", "--t-degree", "6", "--no-cache", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    for suite in ["wdvv", "intersection", "residue", "weyl", "periods"] {
        assert!(checks.iter().any(|c| c["suite"] == suite), "{suite} missing");
    }
}

#[test]
fn residue_and_weyl_json() {
    let (code, out, _) = call(&["residue", "2", "2", "3", "--smu", "1/2", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let entries = v["entries"].as_array().unwrap();
    let top = entries.iter().find(|e| e["g"] == "x1*x2*x3").unwrap();
    assert_eq!(top["raw"], "-1/8");
    assert_eq!(top["normalized"], "1/8");
    assert!(entries.iter().filter(|e| e["g"] != "x1*x2*x3").all(|e| e["raw"] == "0"));

    let (code, out, _) = call(&["weyl", "2", "3", "5", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["determinant"], "1");
    assert_eq!(v["gram"]["corner_plus_tag"], "1/30");
}

#[test]
fn intersection_json_reports_identities() {
    let (code, out, _) = call(&["intersection", "2", "2", "3", "--no-cache", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["identities"]["passed"], true);
    assert_eq!(v["entries"].as_array().unwrap().len(), 6 * 7 / 2);
}

#[test]
fn potential_json_round_trips() {
    let (code, out, _) = call(&["potential", "2", "2", "3", "--json", "--no-cache"]);
    assert_eq!(code, 0);
    let p = Potential::from_json(out.trim()).unwrap();
    assert_eq!(p.to_json(), out.trim());
    assert!(p.wdvv_residual().is_empty());
}

#[test]
fn cache_hit_and_no_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["potential", "2", "2", "2", "--json"];
    let first = binary(&args, dir.path());
    let second = binary(&args, dir.path());
    let fresh = binary(&["potential", "2", "2", "2", "--json", "--no-cache"], dir.path());
    assert!(String::from_utf8_lossy(&first.stderr).contains("cached: false"));
    assert!(String::from_utf8_lossy(&second.stderr).contains("cached: true"));
    assert!(String::from_utf8_lossy(&fresh.stderr).contains("cached: false"));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, fresh.stdout);
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn corrupt_cache_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["potential", "2", "2", "3", "--json"];
    let clean = binary(&args, dir.path());
    let entry = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    fs::write(&entry, "{ not json").unwrap();
    let again = binary(&args, dir.path());
    assert!(again.status.success());
    let err = String::from_utf8_lossy(&again.stderr);
    assert!(err.contains("corrupt cache entry") && err.contains("cached: false"), "{err}");
    assert_eq!(clean.stdout, again.stdout);
    let third = binary(&args, dir.path());
    assert!(String::from_utf8_lossy(&third.stderr).contains("cached: true"));
}

#[test]
fn stale_cache_version_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["potential", "2", "2", "2", "--json"];
    let clean = binary(&args, dir.path());
    let entry = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&entry).unwrap()).unwrap();
    v["version"] = "0.0.0-old".into();
    v["potential"]["terms"] = Value::Array(Vec::new());
    fs::write(&entry, v.to_string()).unwrap();
    let again = binary(&args, dir.path());
    assert!(String::from_utf8_lossy(&again.stderr).contains("cached: false"));
    assert_eq!(clean.stdout, again.stdout);
}
