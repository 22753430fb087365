//! C ABI over `cusp-frobenius`.
//!
//! Conventions:
//! * every fallible function returns a [`CfStatus`]; on failure
//!   [`cf_last_error`] describes it (per thread, until the next call);
//! * strings returned through `char **` are owned by the caller and must be
//!   released with [`cf_string_free`];
//! * a [`CfPotential`] is opaque and released with [`cf_potential_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cusp_frobenius::algebra::{int, parse_rational};
use cusp_frobenius::cli::{info_json, intersection_json, residue_json, run_verify, weyl_json, Suite, VerifySettings};
use cusp_frobenius::cusp::Triplet;
use cusp_frobenius::error::Error;
use cusp_frobenius::intersection::intersection_form;
use cusp_frobenius::wdvv::{required_t_degree, solve, Potential, ReconstructionConfig};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8 or an unknown suite name.
    InvalidArgument = 1,
    InvalidTriplet = 2,
    ChiZero = 3,
    DegenerateArm = 4,
    TruncationTooSmall = 5,
    Underdetermined = 6,
    Inconsistent = 7,
    SingularCartan = 8,
    DegenerateMetric = 9,
    Parse = 10,
    /// Any other library error.
    Failed = 11,
    /// A panic was caught at the boundary.
    Panic = 12,
}

impl From<&Error> for CfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidTriplet(_) => CfStatus::InvalidTriplet,
            Error::ChiZero => CfStatus::ChiZero,
            Error::DegenerateArm(_) => CfStatus::DegenerateArm,
            Error::TruncationTooSmall { .. } => CfStatus::TruncationTooSmall,
            Error::Underdetermined { .. } => CfStatus::Underdetermined,
            Error::Inconsistent { .. } => CfStatus::Inconsistent,
            Error::SingularCartan => CfStatus::SingularCartan,
            Error::DegenerateMetric => CfStatus::DegenerateMetric,
            Error::Parse(_) => CfStatus::Parse,
            _ => CfStatus::Failed,
        }
    }
}

/// A solved potential.
pub struct CfPotential {
    inner: Potential,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(CfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(CfStatus::from(&e), e.to_string())
    }
}

fn invalid(msg: &str) -> Fail {
    Fail(CfStatus::InvalidArgument, msg.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside cusp-frobenius");
            CfStatus::Panic
        }
    }
}

fn triplet(a1: u32, a2: u32, a3: u32) -> Result<Triplet, Fail> {
    Ok(Triplet::sorted([a1, a2, a3])?.0)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("null output pointer"));
    }
    *out = CString::new(s).map_err(|_| invalid("interior nul in output"))?.into_raw();
    Ok(())
}

fn config(a: Triplet, q_order: u32, t_degree: u32) -> ReconstructionConfig {
    let d = if t_degree == 0 { required_t_degree(a, q_order) } else { t_degree };
    ReconstructionConfig::new(q_order, d)
}

/// Solves for the potential through q-order `q_order`. `t_degree` = 0 picks
/// the smallest admissible bound. The triplet may be given in any order.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_potential_solve(a1: u32, a2: u32, a3: u32, q_order: u32, t_degree: u32, out: *mut *mut CfPotential) -> CfStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let a = triplet(a1, a2, a3)?;
        let p = solve(a, &config(a, q_order, t_degree))?;
        *out = Box::into_raw(Box::new(CfPotential { inner: p }));
        Ok(())
    })
}

/// Parses the JSON written by [`cf_potential_to_json`].
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_potential_from_json(json: *const c_char, out: *mut *mut CfPotential) -> CfStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let p = Potential::from_json(read_str(json)?)?;
        *out = Box::into_raw(Box::new(CfPotential { inner: p }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cf_potential_free(p: *mut CfPotential) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live potential and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_potential_to_json(p: *const CfPotential, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| invalid("null potential"))?;
        write_string(out, p.inner.to_json())
    })
}

/// Number of terms of the stored series (cubic part included).
///
/// # Safety
/// `p` must be a live potential and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_potential_term_count(p: *const CfPotential, out: *mut usize) -> CfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| invalid("null potential"))?;
        let out = out.as_mut().ok_or_else(|| invalid("null output pointer"))?;
        *out = p.inner.series().len();
        Ok(())
    })
}

/// Number of nonzero WDVV residual coefficients within the truncation.
///
/// # Safety
/// `p` must be a live potential and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_potential_wdvv_residual_count(p: *const CfPotential, out: *mut usize) -> CfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| invalid("null potential"))?;
        let out = out.as_mut().ok_or_else(|| invalid("null output pointer"))?;
        *out = p.inner.wdvv_residual().len();
        Ok(())
    })
}

/// Intersection form entries and the mu-row identity report, as JSON.
///
/// # Safety
/// `p` must be a live potential and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_intersection_json(p: *const CfPotential, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| invalid("null potential"))?;
        let g = intersection_form(&p.inner);
        let v = g.verify_flat_identities();
        write_string(out, intersection_json(&p.inner, &g, &v).to_string())
    })
}

/// Milnor number, chi and exponents, as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_info_json(a1: u32, a2: u32, a3: u32, out: *mut *mut c_char) -> CfStatus {
    guard(|| write_string(out, info_json(triplet(a1, a2, a3)?).to_string()))
}

/// Residue table as JSON. `s_mu` is "p" or "p/q"; null means 1.
///
/// # Safety
/// `s_mu` must be null or a nul-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_residue_json(a1: u32, a2: u32, a3: u32, s_mu: *const c_char, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let a = triplet(a1, a2, a3)?;
        let s = if s_mu.is_null() { int(1) } else { parse_rational(read_str(s_mu)?)? };
        write_string(out, residue_json(a, &s)?.to_string())
    })
}

/// Cartan matrix, coweights and Gram data as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_weyl_json(a1: u32, a2: u32, a3: u32, out: *mut *mut c_char) -> CfStatus {
    guard(|| write_string(out, weyl_json(triplet(a1, a2, a3)?)?.to_string()))
}

/// Runs a verification suite ("all", "wdvv", "intersection", "residue",
/// "weyl" or "periods") and writes the report as JSON. `passed` receives 1
/// when no check failed. A failed check is not an error status.
///
/// # Safety
/// `suite` must be a nul-terminated string; `out` and `passed` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cf_verify_json(
    a1: u32,
    a2: u32,
    a3: u32,
    suite: *const c_char,
    q_order: u32,
    t_degree: u32,
    seed: u64,
    out: *mut *mut c_char,
    passed: *mut i32,
) -> CfStatus {
    guard(|| {
        let a = triplet(a1, a2, a3)?;
        let name = read_str(suite)?;
        let suite = [Suite::All, Suite::Wdvv, Suite::Intersection, Suite::Residue, Suite::Weyl, Suite::Periods]
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| invalid(&format!("unknown suite {name}")))?;
        let passed = passed.as_mut().ok_or_else(|| invalid("null output pointer"))?;
        let cfg = config(a, q_order, t_degree);
        let settings = VerifySettings { a, cfg: cfg.clone(), seed, s_mu: None, points: 5 };
        let report = run_verify(suite, settings, &mut || solve(a, &cfg));
        write_string(out, report.to_json().to_string())?;
        *passed = report.passed() as i32;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
