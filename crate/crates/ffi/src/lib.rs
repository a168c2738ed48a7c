//! C ABI over yangkit.
//!
//! Objects cross the boundary as opaque handles created by `yk_*_new` or
//! `yk_run_suite` and released by the matching `yk_*_free`. Every fallible
//! call returns a `YkStatus`; on failure `yk_last_error` describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use yangkit::cli::{emit_translation_table, run_suite, Format, Report, Suite, SuiteConfig};
use yangkit::liealg::{build_lie_algebra, Series, Spec};
use yangkit::rmatrix::{check_qybe, check_r_identities};
use yangkit::scalar::{parse_q, Q};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Utf8 = 4,
    Panic = 5,
}

/// A Lie algebra so_N or sp_N.
pub struct YkSpec {
    spec: Spec,
    name: CString,
}

/// A finished suite run.
pub struct YkReport {
    report: Report,
    json: CString,
    text: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), (YkStatus, String)>) -> YkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => YkStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            YkStatus::Panic
        }
    }
}

fn null() -> (YkStatus, String) {
    (YkStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (YkStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|e| (YkStatus::Utf8, e.to_string()))
}

fn zeta_arg(num: i64, den: i64) -> Result<Q, (YkStatus, String)> {
    if den == 0 || num == 0 {
        return Err((YkStatus::InvalidArgument, "zeta must be a nonzero fraction".into()));
    }
    Ok(Q::new(num.into(), den.into()))
}

/// Message for the last failing call on this thread. Owned by the library; valid until the next call.
#[no_mangle]
pub extern "C" fn yk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// series is 'B', 'C' or 'D'.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn yk_spec_new(series: c_char, n: usize, out: *mut *mut YkSpec) -> YkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let c = (series as u8) as char;
        let s = Series::parse(&c.to_string()).ok_or((YkStatus::InvalidArgument, format!("unknown series {c:?}")))?;
        let spec = build_lie_algebra(s, n).map_err(|e| (YkStatus::InvalidArgument, e.to_string()))?;
        let name = CString::new(spec.name()).expect("no interior NUL");
        *out = Box::into_raw(Box::new(YkSpec { spec, name }));
        Ok(())
    })
}

/// # Safety
/// `spec` must come from `yk_spec_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn yk_spec_free(spec: *mut YkSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// "so5", "sp4", ... Owned by the handle.
///
/// # Safety
/// `spec` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn yk_spec_name(spec: *const YkSpec) -> *const c_char {
    spec.as_ref().map_or(ptr::null(), |s| s.name.as_ptr())
}

/// N, the dimension of the natural module.
///
/// # Safety
/// `spec` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn yk_spec_big_n(spec: *const YkSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.spec.big_n)
}

/// dim g_N.
///
/// # Safety
/// `spec` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn yk_spec_dim(spec: *const YkSpec) -> usize {
    spec.as_ref().map_or(0, |s| s.spec.dim())
}

/// kappa = N/2 -+ 1 as a reduced fraction.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn yk_spec_kappa(spec: *const YkSpec, num: *mut i64, den: *mut i64) -> YkStatus {
    guard(|| {
        let s = spec.as_ref().ok_or_else(null)?;
        if num.is_null() || den.is_null() {
            return Err(null());
        }
        let k = &s.spec.kappa;
        let conv = |x: &num_bigint::BigInt| x.to_i64().ok_or((YkStatus::InvalidArgument, "kappa overflows i64".into()));
        *num = conv(k.numer())?;
        *den = conv(k.denom())?;
        Ok(())
    })
}

/// QYBE together with unitarity and crossing at zeta = num/den.
///
/// # Safety
/// `spec` must be a live handle, `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn yk_check_r_matrix(
    spec: *const YkSpec,
    zeta_num: i64,
    zeta_den: i64,
    passed: *mut bool,
) -> YkStatus {
    guard(|| {
        let s = spec.as_ref().ok_or_else(null)?;
        if passed.is_null() {
            return Err(null());
        }
        let z = zeta_arg(zeta_num, zeta_den)?;
        *passed = check_qybe(&s.spec, &z).passed() && check_r_identities(&s.spec, &z).passed();
        Ok(())
    })
}

/// Translation table as JSON. Free the string with `yk_string_free`.
///
/// # Safety
/// `spec` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn yk_translation_table_json(spec: *const YkSpec, out: *mut *mut c_char) -> YkStatus {
    guard(|| {
        let s = spec.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let json = emit_translation_table(&s.spec).to_json();
        *out = CString::new(json).expect("no interior NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn yk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn parse_config(json: &str) -> Result<SuiteConfig, (YkStatus, String)> {
    let bad = |m: String| (YkStatus::Config, m);
    let v: serde_json::Value = serde_json::from_str(json).map_err(|e| bad(e.to_string()))?;
    let mut cfg = SuiteConfig::default();
    for s in v["specs"].as_array().map(|a| a.as_slice()).unwrap_or(&[]) {
        let name = s.get(0).and_then(|x| x.as_str()).ok_or_else(|| bad("spec entries are [series, n]".into()))?;
        let n = s.get(1).and_then(|x| x.as_u64()).ok_or_else(|| bad("spec entries are [series, n]".into()))?;
        let series = Series::parse(name).ok_or_else(|| bad(format!("unknown series {name:?}")))?;
        cfg.specs.push((series, n as usize));
    }
    if let Some(zs) = v.get("zetas").and_then(|x| x.as_array()) {
        cfg.zetas = zs
            .iter()
            .map(|z| {
                z.as_str()
                    .ok_or_else(|| bad("zetas are strings".into()))
                    .and_then(|s| parse_q(s).map_err(|e| bad(e.to_string())))
            })
            .collect::<Result<_, _>>()?;
    }
    for s in v["suites"].as_array().map(|a| a.as_slice()).unwrap_or(&[]) {
        let name = s.as_str().ok_or_else(|| bad("suites are strings".into()))?;
        cfg.suites.push(name.parse::<Suite>().map_err(|e| bad(e.to_string()))?);
    }
    if let Some(o) = v.get("order").and_then(|x| x.as_u64()) {
        cfg.order = o as usize;
    }
    if let Some(r) = v.get("rs_max").and_then(|x| x.as_u64()) {
        cfg.rs_max = r as usize;
    }
    Ok(cfg)
}

/// Runs suites from a JSON config:
/// {"specs": [["B", 2]], "zetas": ["1", "1/3"], "suites": ["qybe"], "order": 8, "rs_max": 3}.
///
/// # Safety
/// `config_json` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn yk_run_suite(config_json: *const c_char, out: *mut *mut YkReport) -> YkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let cfg = parse_config(str_arg(config_json)?)?;
        let report = run_suite(&cfg).map_err(|e| (YkStatus::Config, e.to_string()))?;
        let json = CString::new(report.render(Format::Json)).expect("no interior NUL");
        let text = CString::new(report.render(Format::Text)).expect("no interior NUL");
        *out = Box::into_raw(Box::new(YkReport { report, json, text }));
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn yk_report_passed(report: *const YkReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.passed())
}

/// Number of check records.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn yk_report_len(report: *const YkReport) -> usize {
    report.as_ref().map_or(0, |r| r.report.records.len())
}

/// Report as JSON. Owned by the handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn yk_report_json(report: *const YkReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Report as aligned text. Owned by the handle.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn yk_report_text(report: *const YkReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.text.as_ptr())
}

/// # Safety
/// `report` must come from `yk_run_suite` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn yk_report_free(report: *mut YkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
