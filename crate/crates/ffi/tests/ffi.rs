use std::ffi::{CStr, CString};
use std::ptr;

use galois_points_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(gp_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn field_arithmetic_round_trip() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(gp_field_new(3, 2, &mut f), GP_OK);
        assert_eq!(gp_field_size(f), 9);
        let mut out = 0u32;
        for a in 0..9 {
            for b in 1..9 {
                assert_eq!(gp_field_mul(f, a, b, &mut out), GP_OK);
                let prod = out;
                assert_eq!(gp_field_div(f, prod, b, &mut out), GP_OK);
                assert_eq!(out, a);
            }
            assert_eq!(gp_field_add(f, a, 0, &mut out), GP_OK);
            assert_eq!(out, a);
        }
        assert_eq!(gp_field_div(f, 1, 0, &mut out), GP_INVALID_ARGUMENT);
        assert!(!last_error().is_empty());
        assert_eq!(gp_field_add(f, 9, 0, &mut out), GP_INVALID_ARGUMENT);
        gp_field_free(f);
    }
}

#[test]
fn bad_arguments_are_reported() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(gp_field_new(4, 1, &mut f), GP_INVALID_ARGUMENT);
        assert!(f.is_null());
        assert_eq!(gp_field_new(3, 1, ptr::null_mut()), GP_NULL_POINTER);
        assert_eq!(gp_field_size(ptr::null()), 0);
        gp_field_free(ptr::null_mut());

        let sel = CString::new("nonsense").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(
            gp_run(3, 1, 2, 0, sel.as_ptr(), 0, &mut r),
            GP_INVALID_ARGUMENT
        );
        let sel = CString::new("thm1a").unwrap();
        assert_eq!(
            gp_run(4, 1, 2, 0, sel.as_ptr(), 0, &mut r),
            GP_INVALID_ARGUMENT
        );
        assert!(r.is_null());
        assert_eq!(gp_report_passed(ptr::null()), 0);
        assert!(gp_report_json(ptr::null()).is_null());
        gp_report_free(ptr::null_mut());
        gp_string_free(ptr::null_mut());
    }
}

#[test]
fn run_thm2_over_c_abi() {
    unsafe {
        let sel = CString::new("thm2").unwrap();
        let mut r = ptr::null_mut();
        assert_eq!(
            gp_run(2, 1, 0, 2, sel.as_ptr(), 7, &mut r),
            GP_OK,
            "{}",
            last_error()
        );
        assert_eq!(gp_report_passed(r), 1);
        assert!(gp_report_len(r) > 0);
        let s = gp_report_json(r);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        gp_string_free(s);
        gp_report_free(r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["verdict"], "pass");
    }
}
