use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use fnx_ffi::*;

const QUAD: &str = r#"{"n":1,"support":[[0],[1],[2]],"coeffs":[[-3,1,2]]}"#;

fn load(json: &str) -> (FnxStatus, *mut FnxSystem) {
    let c = CString::new(json).unwrap();
    let mut h = ptr::null_mut();
    let s = unsafe { fnx_system_from_json(c.as_ptr(), &mut h) };
    (s, h)
}

#[test]
fn quad_round_trip() {
    let (s, h) = load(QUAD);
    assert_eq!(s, FnxStatus::Ok);
    let (mut n, mut k, mut c) = (0usize, 0usize, 0usize);
    unsafe {
        assert_eq!(fnx_system_dims(h, &mut n, &mut k), FnxStatus::Ok);
        assert_eq!((n, k), (1, 1));
        assert_eq!(fnx_count_positive(h, &mut c), FnxStatus::Ok);
        assert_eq!(c, 1);
        let (mut a, mut b) = (0usize, 0usize);
        assert_eq!(fnx_verify_bijection(h, 0, &mut a, &mut b), FnxStatus::Ok);
        assert_eq!((a, b), (1, 1));
        let mut out = ptr::null_mut();
        assert_eq!(fnx_gale_dual_json(h, &mut out), FnxStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        fnx_string_free(out);
        assert!(text.contains("\"nW\":1"), "{text}");
        fnx_system_free(h);
    }
}

#[test]
fn bounds_through_the_abi() {
    let (mut v, mut cap) = (0.0f64, 0u64);
    unsafe {
        assert_eq!(fnx_new_bound(2, 2, &mut v, &mut cap), FnxStatus::Ok);
        assert_eq!(cap, 20);
        assert!((v - 20.778112).abs() < 1e-5);
        assert_eq!(fnx_new_bound(1, 2, &mut v, &mut cap), FnxStatus::OutOfRange);
        assert!(!fnx_last_error_message().is_null());
        let mut out = ptr::null_mut();
        assert_eq!(fnx_bounds_json(2, 2, &mut out), FnxStatus::Ok);
        let text = CStr::from_ptr(out).to_str().unwrap().to_owned();
        fnx_string_free(out);
        assert!(text.contains("\"cap\":\"5184\""), "{text}");
    }
}

#[test]
fn errors_and_nulls() {
    let (s, h) = load("{not json");
    assert_eq!(s, FnxStatus::InvalidInput);
    assert!(h.is_null());
    let msg = unsafe { CStr::from_ptr(fnx_last_error_message()) }.to_str().unwrap();
    assert!(msg.contains("parse"), "{msg}");
    let mut c = 0usize;
    unsafe {
        assert_eq!(fnx_count_positive(ptr::null(), &mut c), FnxStatus::NullPointer);
        assert_eq!(fnx_system_from_json(ptr::null(), ptr::null_mut()), FnxStatus::NullPointer);
        fnx_system_free(ptr::null_mut());
        fnx_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated_and_compiles() {
    let dir = env!("CARGO_MANIFEST_DIR");
    let header = std::path::Path::new(dir).join("include/fnx.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["fnx_system_from_json", "fnx_last_error_message", "FNX_STATUS_OK", "typedef struct FnxSystem FnxSystem"] {
        assert!(text.contains(name), "header lacks {name}");
    }
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c", header.to_str().unwrap()]).output() else {
        eprintln!("no C compiler, syntax check skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_against_staticlib() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libfnx_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("static library or C compiler unavailable, link check skipped");
        return;
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "fnx.h"
int main(void) {
    FnxSystem *h = NULL;
    size_t c = 0;
    if (fnx_system_from_json("{\"n\":1,\"support\":[[0],[1],[2]],\"coeffs\":[[-3,1,2]]}", &h) != FNX_STATUS_OK) return 3;
    if (fnx_count_positive(h, &c) != FNX_STATUS_OK) return 4;
    fnx_system_free(h);
    printf("%zu\n", c);
    return c == 1 ? 0 : 5;
}
"#,
    )
    .unwrap();
    let bin = tmp.path().join("main");
    let include = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let st = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1");
}
