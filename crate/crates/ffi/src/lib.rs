//! C ABI over `oriented-cube`.
//!
//! Every function returns an [`OcStatus`] and writes results through out
//! pointers. On failure, [`oc_last_error_message`] describes the last error
//! on the calling thread. Strings and reports handed out by the library must
//! be released with [`oc_string_free`] and [`oc_report_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use oriented_cube::driver::{self, Certification, Source};
use oriented_cube::envelope::{CertificateEnvelope, Kind};
use oriented_cube::levels::WeightVector;
use oriented_cube::{cube, primitive, Error};

#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OcStatus {
    Ok = 0,
    /// The computation ran and a check did not hold.
    CheckFailed = 1,
    InvalidArgument = 2,
    NullPointer = 3,
    Internal = 4,
}

/// A certification run: the report and its certificates.
pub struct OcReport {
    inner: Certification,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: OcStatus, msg: impl Into<String>) -> OcStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> OcStatus {
    let status = match e {
        Error::CheckFailed(_) => OcStatus::CheckFailed,
        Error::Io { .. } | Error::Serialization(_) | Error::Overflow => OcStatus::Internal,
        _ => OcStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> OcStatus) -> OcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == OcStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(OcStatus::Internal, "panic inside the library"),
    }
}

unsafe fn path_arg<'a>(p: *const c_char, name: &str) -> Result<&'a Path, OcStatus> {
    if p.is_null() {
        return Err(fail(OcStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(OcStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn hand_out(s: String, out: *mut *mut c_char) -> OcStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            OcStatus::Ok
        }
        Err(_) => fail(OcStatus::Internal, "string contains a NUL byte"),
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn oc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Number of rectangles of `C^n`, `1 ≤ n ≤ 16`.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn oc_rectangle_count(n: u32, out: *mut u64) -> OcStatus {
    guard(|| {
        if out.is_null() {
            return fail(OcStatus::NullPointer, "out is null");
        }
        if let Err(e) = cube::check_dim(n as usize) {
            return from_error(e);
        }
        *out = cube::rectangle_count(n as usize);
        OcStatus::Ok
    })
}

/// Whether every 3- and 4-class numerical rectangle of `h` is realized.
///
/// # Safety
/// `weights` must point to `len` readable values and `out` must be valid
/// for a write.
#[no_mangle]
pub unsafe extern "C" fn oc_is_primitive(weights: *const u32, len: usize, out: *mut bool) -> OcStatus {
    guard(|| {
        if weights.is_null() || out.is_null() {
            return fail(OcStatus::NullPointer, "weights or out is null");
        }
        let h = match WeightVector::new(std::slice::from_raw_parts(weights, len).to_vec()) {
            Ok(h) => h,
            Err(e) => return from_error(e),
        };
        match primitive::is_primitive(&h) {
            Ok(v) => {
                *out = v.primitive;
                OcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Certifies every hyperplane orbit of `C^n` (`1 ≤ n ≤ 7`) with the default
/// enumeration. `jobs = 0` uses one worker per core. An unconfirmed verdict
/// is still `Ok`; ask [`oc_report_confirmed`].
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn oc_certify(n: u32, jobs: u32, out: *mut *mut OcReport) -> OcStatus {
    guard(|| {
        if out.is_null() {
            return fail(OcStatus::NullPointer, "out is null");
        }
        let n = n as usize;
        match driver::certify_all(n, Source::default_for(n), jobs as usize) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(OcReport { inner: c }));
                OcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `report` must come from [`oc_certify`] and `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn oc_report_confirmed(report: *const OcReport, out: *mut bool) -> OcStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(OcStatus::NullPointer, "report or out is null");
        }
        *out = (*report).inner.report.verdict.confirmed;
        OcStatus::Ok
    })
}

/// Number of orbits in the report.
///
/// # Safety
/// `report` must come from [`oc_certify`] and `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn oc_report_orbit_count(report: *const OcReport, out: *mut usize) -> OcStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(OcStatus::NullPointer, "report or out is null");
        }
        *out = (*report).inner.report.orbits.len();
        OcStatus::Ok
    })
}

/// The report as a canonical JSON envelope. Free with [`oc_string_free`].
///
/// # Safety
/// `report` must come from [`oc_certify`] and `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn oc_report_to_json(report: *const OcReport, out: *mut *mut c_char) -> OcStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(OcStatus::NullPointer, "report or out is null");
        }
        let r = &(*report).inner.report;
        match CertificateEnvelope::seal(Kind::Report, r.n, r).and_then(|e| e.to_bytes()) {
            Ok(bytes) => hand_out(String::from_utf8_lossy(&bytes).trim_end().to_string(), out),
            Err(e) => from_error(e),
        }
    })
}

/// Writes the report and its certificates under `dir` and returns the
/// report path. Free the path with [`oc_string_free`].
///
/// # Safety
/// `report` must come from [`oc_certify`], `dir` must be a NUL-terminated
/// string and `out_path` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn oc_report_write_store(
    report: *const OcReport,
    dir: *const c_char,
    out_path: *mut *mut c_char,
) -> OcStatus {
    guard(|| {
        if report.is_null() || out_path.is_null() {
            return fail(OcStatus::NullPointer, "report or out_path is null");
        }
        let dir = match path_arg(dir, "dir") {
            Ok(d) => d,
            Err(s) => return s,
        };
        match driver::write_store(dir, &(*report).inner) {
            Ok(p) => hand_out(p.display().to_string(), out_path),
            Err(e) => from_error(e),
        }
    })
}

/// Replays a stored report and every certificate it names. `*ok` is false
/// when anything fails to replay; the problems are in the last error
/// message.
///
/// # Safety
/// `report_path` must be a NUL-terminated string and `ok` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn oc_verify_store(report_path: *const c_char, ok: *mut bool) -> OcStatus {
    guard(|| {
        if ok.is_null() {
            return fail(OcStatus::NullPointer, "ok is null");
        }
        let path = match path_arg(report_path, "report_path") {
            Ok(p) => p,
            Err(s) => return s,
        };
        match driver::verify_report(path, None) {
            Ok(v) if v.ok => {
                *ok = true;
                OcStatus::Ok
            }
            Ok(v) => {
                *ok = false;
                fail(OcStatus::CheckFailed, v.problems.join("; "))
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn oc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `report` must be null or come from [`oc_certify`], freed once.
#[no_mangle]
pub unsafe extern "C" fn oc_report_free(report: *mut OcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
