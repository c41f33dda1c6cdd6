use std::ffi::{CStr, CString};
use std::ptr;

use oriented_cube_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(oc_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn rectangle_counts() {
    let mut c = 0u64;
    for (n, want) in [(2, 1), (3, 12), (4, 100), (5, 720)] {
        assert_eq!(unsafe { oc_rectangle_count(n, &mut c) }, OcStatus::Ok);
        assert_eq!(c, want);
    }
    assert_eq!(unsafe { oc_rectangle_count(17, &mut c) }, OcStatus::InvalidArgument);
    assert!(last_error().contains("17"));
    assert_eq!(unsafe { oc_rectangle_count(3, ptr::null_mut()) }, OcStatus::NullPointer);
}

#[test]
fn primitivity() {
    let mut p = false;
    let h = [1u32, 1, 2];
    assert_eq!(unsafe { oc_is_primitive(h.as_ptr(), h.len(), &mut p) }, OcStatus::Ok);
    assert!(p);
    let h = [1u32, 2, 2, 3];
    assert_eq!(unsafe { oc_is_primitive(h.as_ptr(), h.len(), &mut p) }, OcStatus::Ok);
    assert!(!p);
    assert_eq!(unsafe { oc_is_primitive(h.as_ptr(), 0, &mut p) }, OcStatus::InvalidArgument);
    assert_eq!(unsafe { oc_is_primitive(ptr::null(), 3, &mut p) }, OcStatus::NullPointer);
}

#[test]
fn certify_store_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { oc_certify(4, 1, &mut report) }, OcStatus::Ok);
    let (mut confirmed, mut orbits) = (false, 0usize);
    unsafe {
        assert_eq!(oc_report_confirmed(report, &mut confirmed), OcStatus::Ok);
        assert_eq!(oc_report_orbit_count(report, &mut orbits), OcStatus::Ok);
    }
    assert!(confirmed);
    assert_eq!(orbits, 3);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { oc_report_to_json(report, &mut json) }, OcStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    assert!(text.starts_with('{') && text.contains("\"kind\":\"report\""));
    unsafe { oc_string_free(json) };

    let c_dir = CString::new(dir.path().to_str().unwrap()).unwrap();
    let mut path = ptr::null_mut();
    assert_eq!(unsafe { oc_report_write_store(report, c_dir.as_ptr(), &mut path) }, OcStatus::Ok);
    let mut ok = false;
    assert_eq!(unsafe { oc_verify_store(path, &mut ok) }, OcStatus::Ok);
    assert!(ok);

    // corrupt one certificate
    let certs = dir.path().join("certs");
    let victim = std::fs::read_dir(&certs).unwrap().next().unwrap().unwrap().path();
    let mut bytes = std::fs::read(&victim).unwrap();
    let i = bytes.len() / 2;
    bytes[i] ^= 1;
    std::fs::write(&victim, bytes).unwrap();
    assert_eq!(unsafe { oc_verify_store(path, &mut ok) }, OcStatus::CheckFailed);
    assert!(!ok);
    let stem = victim.file_stem().unwrap().to_str().unwrap().to_owned();
    assert!(last_error().contains(&stem), "{}", last_error());

    unsafe {
        oc_string_free(path);
        oc_report_free(report);
        oc_report_free(ptr::null_mut());
        oc_string_free(ptr::null_mut());
    }
}

#[test]
fn certify_rejects_large_n() {
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { oc_certify(8, 1, &mut report) }, OcStatus::InvalidArgument);
    assert!(report.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn header_compiles_as_c() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let header = std::fs::read_to_string(format!("{include}/oriented_cube.h")).unwrap();
    for f in ["oc_certify", "oc_verify_store", "oc_last_error_message", "typedef struct OcReport OcReport"] {
        assert!(header.contains(f), "{f} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        r#"#include "oriented_cube.h"
int main(void) {
    uint64_t c; OcReport *r = NULL; bool ok;
    if (oc_rectangle_count(3, &c) != OC_STATUS_OK) return 1;
    if (oc_certify(3, 0, &r) == OC_STATUS_OK) { oc_report_confirmed(r, &ok); oc_report_free(r); }
    return c == 12 ? 0 : (int)oc_last_error_message()[0];
}
"#,
    )
    .unwrap();
    let Ok(out) = std::process::Command::new("cc")
        .args(["-std=c99", "-fsyntax-only", "-Wall", "-Werror", "-I", include])
        .arg(&src)
        .output()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
