use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::Path;
use std::process::Command;
use std::ptr;

use cusp_frobenius_ffi::*;
use serde_json::Value;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    cf_string_free(s);
    out
}

fn last_error() -> String {
    let p = cf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn solve_serialize_reload() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(cf_potential_solve(2, 2, 2, 2, 0, &mut p), CfStatus::Ok);
        assert!(cf_last_error().is_null());
        let mut n = 0usize;
        assert_eq!(cf_potential_wdvv_residual_count(p, &mut n), CfStatus::Ok);
        assert_eq!(n, 0);
        let mut terms = 0usize;
        assert_eq!(cf_potential_term_count(p, &mut terms), CfStatus::Ok);
        assert!(terms > 0);

        let mut s = ptr::null_mut();
        assert_eq!(cf_potential_to_json(p, &mut s), CfStatus::Ok);
        let json = take(s);
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["A"], serde_json::json!([2, 2, 2]));
        assert_eq!(v["K"], 2);

        let c = CString::new(json.clone()).unwrap();
        let mut q = ptr::null_mut();
        assert_eq!(cf_potential_from_json(c.as_ptr(), &mut q), CfStatus::Ok);
        let mut s2 = ptr::null_mut();
        assert_eq!(cf_potential_to_json(q, &mut s2), CfStatus::Ok);
        assert_eq!(take(s2), json);

        let mut g = ptr::null_mut();
        assert_eq!(cf_intersection_json(q, &mut g), CfStatus::Ok);
        let gv: Value = serde_json::from_str(&take(g)).unwrap();
        assert_eq!(gv["identities"]["passed"], true);

        cf_potential_free(p);
        cf_potential_free(q);
        cf_potential_free(ptr::null_mut());
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(cf_potential_solve(3, 3, 3, 1, 0, &mut p), CfStatus::ChiZero);
        assert!(p.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(cf_potential_solve(0, 2, 2, 1, 0, &mut p), CfStatus::InvalidTriplet);
        assert_eq!(cf_potential_solve(2, 3, 7, 1, 2, &mut p), CfStatus::TruncationTooSmall);
        assert_eq!(cf_potential_solve(1, 2, 2, 1, 0, &mut p), CfStatus::DegenerateArm);
        assert_eq!(cf_potential_solve(2, 2, 2, 1, 0, ptr::null_mut()), CfStatus::InvalidArgument);

        let mut s = ptr::null_mut();
        assert_eq!(cf_weyl_json(2, 3, 6, &mut s), CfStatus::SingularCartan);
        assert!(last_error().contains("singular"));
        let bad = CString::new("{\"A\": [2,2,2]").unwrap();
        assert_eq!(cf_potential_from_json(bad.as_ptr(), &mut p), CfStatus::Parse);
        let smu = CString::new("1/0").unwrap();
        assert_ne!(cf_residue_json(2, 2, 2, smu.as_ptr(), &mut s), CfStatus::Ok);
        let suite = CString::new("everything").unwrap();
        let mut passed = 0;
        assert_eq!(cf_verify_json(2, 2, 2, suite.as_ptr(), 1, 0, 1, &mut s, &mut passed), CfStatus::InvalidArgument);
        assert!(last_error().contains("everything"));
    }
}

#[test]
fn json_helpers() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cf_info_json(3, 2, 2, &mut s), CfStatus::Ok);
        let v: Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["mu"], 6);
        assert_eq!(v["chi"], "1/3");

        assert_eq!(cf_residue_json(2, 2, 2, ptr::null(), &mut s), CfStatus::Ok);
        let v: Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["sign_constant"], "-1");

        assert_eq!(cf_weyl_json(2, 3, 5, &mut s), CfStatus::Ok);
        let v: Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["determinant"], "1");

        let suite = CString::new("weyl").unwrap();
        let mut passed = 0;
        assert_eq!(cf_verify_json(2, 2, 3, suite.as_ptr(), 1, 0, 7, &mut s, &mut passed), CfStatus::Ok);
        assert_eq!(passed, 1);
        let v: Value = serde_json::from_str(&take(s)).unwrap();
        assert!(!v["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("cusp_frobenius.h");
    let text = std::fs::read_to_string(&header).expect("build.rs writes the header");
    for name in ["cf_potential_solve", "cf_potential_free", "cf_last_error", "cf_string_free", "CF_STATUS_CHI_ZERO", "typedef struct CfPotential CfPotential"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).status() else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
