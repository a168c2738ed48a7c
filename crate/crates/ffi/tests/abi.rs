use std::ffi::{CStr, CString};
use std::ptr;
use yangkit_ffi::*;

fn spec(series: u8, n: usize) -> *mut YkSpec {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { yk_spec_new(series as _, n, &mut s) }, YkStatus::Ok);
    s
}

#[test]
fn spec_handle() {
    let s = spec(b'B', 2);
    unsafe {
        assert_eq!(CStr::from_ptr(yk_spec_name(s)).to_str().unwrap(), "so5");
        assert_eq!(yk_spec_big_n(s), 5);
        assert_eq!(yk_spec_dim(s), 10);
        let (mut num, mut den) = (0, 0);
        assert_eq!(yk_spec_kappa(s, &mut num, &mut den), YkStatus::Ok);
        assert_eq!((num, den), (3, 2));
        let mut ok = false;
        assert_eq!(yk_check_r_matrix(s, 1, 3, &mut ok), YkStatus::Ok);
        assert!(ok);
        assert_eq!(yk_check_r_matrix(s, 0, 1, &mut ok), YkStatus::InvalidArgument);
        yk_spec_free(s);
    }
}

#[test]
fn errors() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(yk_spec_new(b'E' as _, 2, &mut s), YkStatus::InvalidArgument);
        assert!(CStr::from_ptr(yk_last_error()).to_str().unwrap().contains("unknown series"));
        assert_eq!(yk_spec_new(b'D' as _, 1, &mut s), YkStatus::InvalidArgument);
        assert_eq!(yk_spec_new(b'C' as _, 1, ptr::null_mut()), YkStatus::NullPointer);
        assert!(yk_spec_name(ptr::null()).is_null());
        yk_spec_free(ptr::null_mut());
        let mut r = ptr::null_mut();
        let bad = CString::new(r#"{"specs": [["B", 2]], "suites": ["nope"]}"#).unwrap();
        assert_eq!(yk_run_suite(bad.as_ptr(), &mut r), YkStatus::Config);
        let empty = CString::new(r#"{"specs": [], "suites": ["qybe"]}"#).unwrap();
        assert_eq!(yk_run_suite(empty.as_ptr(), &mut r), YkStatus::Config);
        assert!(CStr::from_ptr(yk_last_error()).to_str().unwrap().contains("no spec"));
        assert_eq!(yk_run_suite(ptr::null(), &mut r), YkStatus::NullPointer);
    }
}

#[test]
fn suite_report() {
    let cfg = CString::new(r#"{"specs": [["C", 1], ["B", 1]], "zetas": ["1", "1/3"], "suites": ["qybe", "liealg"]}"#)
        .unwrap();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(yk_run_suite(cfg.as_ptr(), &mut r), YkStatus::Ok);
        assert!(yk_report_passed(r));
        assert!(yk_report_len(r) > 0);
        let json: serde_json::Value =
            serde_json::from_str(CStr::from_ptr(yk_report_json(r)).to_str().unwrap()).unwrap();
        assert_eq!(json["report_version"], 1);
        assert_eq!(json["records"].as_array().unwrap().len(), yk_report_len(r));
        assert!(CStr::from_ptr(yk_report_text(r)).to_str().unwrap().contains("qybe"));
        yk_report_free(r);
    }
}

#[test]
fn translation_table() {
    let s = spec(b'C', 2);
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(yk_translation_table_json(s, &mut out), YkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        assert_eq!(v["spec"], "sp4");
        assert_eq!(v["rows"][0]["offset"], "3");
        yk_string_free(out);
        yk_spec_free(s);
    }
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/yangkit.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    for line in src.lines().filter(|l| l.contains("extern \"C\" fn ")) {
        let name = line.split("fn ").nth(1).unwrap().split('(').next().unwrap();
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(h.contains("YK_STATUS_NULL_POINTER = 1"));
}
