//! C ABI over the verification engine.
//!
//! Objects are opaque handles released with their `*_free` function.
//! Functions return a status code; on failure `gp_last_error` holds a
//! message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use galois_points::field::{build_field, FieldCtx, FieldElem};
use galois_points::suite::{run, Report, RunConfig, Selector};
use galois_points::Error;

pub const GP_OK: i32 = 0;
pub const GP_NULL_POINTER: i32 = 1;
pub const GP_INVALID_ARGUMENT: i32 = 2;
pub const GP_CHECK_FAILED: i32 = 3;
pub const GP_INTERNAL: i32 = 4;

/// A finite field `F_{p^k}`. Elements are passed as their integer encoding
/// in `0 .. p^k`.
pub struct GpField(Arc<FieldCtx>);

/// The result of one verification run.
pub struct GpReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => GP_INTERNAL,
        _ => GP_INVALID_ARGUMENT,
    }
}

fn guard(f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("panic inside the engine");
            GP_INTERNAL
        }
    }
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds `F_{p^k}` into `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gp_field_new(p: u64, k: u32, out: *mut *mut GpField) -> i32 {
    guard(|| {
        if out.is_null() {
            set_error("out is null");
            return GP_NULL_POINTER;
        }
        match build_field(p, k) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(GpField(f)));
                GP_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                code_of(&e)
            }
        }
    })
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle from `gp_field_new`.
#[no_mangle]
pub unsafe extern "C" fn gp_field_size(field: *const GpField) -> u64 {
    field.as_ref().map_or(0, |f| f.0.size())
}

unsafe fn binary(
    field: *const GpField,
    a: u32,
    b: u32,
    out: *mut u32,
    op: impl FnOnce(&FieldCtx, FieldElem, FieldElem) -> Result<FieldElem, Error>,
) -> i32 {
    guard(|| {
        let (Some(f), false) = (field.as_ref(), out.is_null()) else {
            set_error("null pointer");
            return GP_NULL_POINTER;
        };
        let (Some(x), Some(y)) = (f.0.elem(a as u64), f.0.elem(b as u64)) else {
            set_error("element out of range");
            return GP_INVALID_ARGUMENT;
        };
        match op(&f.0, x, y) {
            Ok(v) => {
                *out = v.raw();
                GP_OK
            }
            Err(e) => {
                set_error(&e.to_string());
                code_of(&e)
            }
        }
    })
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gp_field_add(field: *const GpField, a: u32, b: u32, out: *mut u32) -> i32 {
    binary(field, a, b, out, |f, x, y| Ok(f.add(x, y)))
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gp_field_mul(field: *const GpField, a: u32, b: u32, out: *mut u32) -> i32 {
    binary(field, a, b, out, |f, x, y| Ok(f.mul(x, y)))
}

/// `a / b`; fails with `GP_INVALID_ARGUMENT` when `b = 0`.
///
/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gp_field_div(field: *const GpField, a: u32, b: u32, out: *mut u32) -> i32 {
    binary(field, a, b, out, |f, x, y| f.div(x, y))
}

/// # Safety
/// `field` must be null or a handle from `gp_field_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn gp_field_free(field: *mut GpField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Runs the checks named by `selector` (`thm1a`, `thm1b`, `thm2`, `lemma1`,
/// `prop1`, `all`). Pass `m = 0` or `r = 0` to leave that parameter unset.
/// The report is written to `*out` even when checks fail; the return value
/// is then `GP_CHECK_FAILED`.
///
/// # Safety
/// `selector` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gp_run(
    p: u64,
    n: u32,
    m: u64,
    r: u32,
    selector: *const c_char,
    seed: u64,
    out: *mut *mut GpReport,
) -> i32 {
    guard(|| {
        if selector.is_null() || out.is_null() {
            set_error("null pointer");
            return GP_NULL_POINTER;
        }
        let sel: Selector = match CStr::from_ptr(selector)
            .to_str()
            .map_err(|e| e.to_string())
            .and_then(|s| s.parse().map_err(|e: Error| e.to_string()))
        {
            Ok(s) => s,
            Err(e) => {
                set_error(&e);
                return GP_INVALID_ARGUMENT;
            }
        };
        let mut cfg = RunConfig::new(p, n, sel);
        cfg.seed = seed;
        cfg.m = (m != 0).then_some(m);
        cfg.r = (r != 0).then_some(r);
        match run(&cfg) {
            Ok(rep) => {
                let passed = rep.passed();
                *out = Box::into_raw(Box::new(GpReport(rep)));
                if passed {
                    GP_OK
                } else {
                    set_error("some checks failed");
                    GP_CHECK_FAILED
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                code_of(&e)
            }
        }
    })
}

/// 1 if every check passed, 0 otherwise (including a null handle).
///
/// # Safety
/// `report` must be null or a live handle from `gp_run`.
#[no_mangle]
pub unsafe extern "C" fn gp_report_passed(report: *const GpReport) -> i32 {
    report.as_ref().map_or(0, |r| r.0.passed() as i32)
}

/// Number of checks in the report.
///
/// # Safety
/// `report` must be null or a live handle from `gp_run`.
#[no_mangle]
pub unsafe extern "C" fn gp_report_len(report: *const GpReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.checks.len())
}

/// The report as JSON with sorted keys; release with `gp_string_free`.
/// Null for a null handle.
///
/// # Safety
/// `report` must be null or a live handle from `gp_run`.
#[no_mangle]
pub unsafe extern "C" fn gp_report_json(report: *const GpReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => CString::new(r.0.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `report` must be null or a handle from `gp_run`, freed once.
#[no_mangle]
pub unsafe extern "C" fn gp_report_free(report: *mut GpReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn gp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
