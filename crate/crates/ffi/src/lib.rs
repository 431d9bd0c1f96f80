//! C ABI over `fnx`. Every function returns an `FnxStatus`; on failure the
//! message is kept per thread and read back with `fnx_last_error_message`.
//! Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fnx::bounds::{bounds_table, new_fewnomial_bound};
use fnx::count::count_system_exact;
use fnx::gale::{gale_dual, verify_bijection};
use fnx::real::precision_from_env;
use fnx::system::FewnomialSystem;
use fnx::FnxError;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnxStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed JSON, bad UTF-8 or an ill-formed system.
    InvalidInput = 2,
    /// Parameters outside the range a formula or method supports.
    OutOfRange = 3,
    /// Singular or degenerate data (no invertible block, non-generic forms, ...).
    Degenerate = 4,
    /// A mathematical check failed.
    CheckFailed = 5,
    /// Numeric methods could not settle the answer.
    Inconclusive = 6,
    /// A panic was caught at the boundary.
    Internal = 7,
}

/// Opaque fewnomial system.
pub struct FnxSystem {
    inner: FewnomialSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &FnxError) -> FnxStatus {
    match e {
        FnxError::Parse(_) | FnxError::Io(_) | FnxError::Span(_) | FnxError::Form(_) | FnxError::Domain(_) => FnxStatus::InvalidInput,
        FnxError::Range(_) | FnxError::Dimension(_) | FnxError::Size(_) => FnxStatus::OutOfRange,
        FnxError::Violation(_) => FnxStatus::CheckFailed,
        FnxError::Inconclusive(_) | FnxError::Resolution(_) | FnxError::Consistency(_) => FnxStatus::Inconclusive,
        _ => FnxStatus::Degenerate,
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), (FnxStatus, String)>>(f: F) -> FnxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FnxStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside fnx".into());
            FnxStatus::Internal
        }
    }
}

fn lift(e: FnxError) -> (FnxStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (FnxStatus, String) {
    (FnxStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (FnxStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (FnxStatus::InvalidInput, "input is not UTF-8".into()))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (FnxStatus, String)> {
    let c = CString::new(s).map_err(|_| (FnxStatus::Internal, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failure on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn fnx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fnx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Frees a string returned through an `out` parameter. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fnx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a system from JSON `{"n": .., "support": [[..]], "coeffs": [[..]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fnx_system_from_json(json: *const c_char, out: *mut *mut FnxSystem) -> FnxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let s = read_str(json)?;
        let sys = FewnomialSystem::from_json(s).map_err(lift)?;
        *out = Box::into_raw(Box::new(FnxSystem { inner: sys }));
        Ok(())
    })
}

/// Releases a system handle. NULL is ignored.
///
/// # Safety
/// `sys` must come from `fnx_system_from_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fnx_system_free(sys: *mut FnxSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of variables n and k = |W| − n − 1.
///
/// # Safety
/// `sys` must be a live handle; `n` and `k` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fnx_system_dims(sys: *const FnxSystem, n: *mut usize, k: *mut usize) -> FnxStatus {
    guard(|| {
        if sys.is_null() || n.is_null() || k.is_null() {
            return Err(null());
        }
        *n = (*sys).inner.n;
        *k = (*sys).inner.k();
        Ok(())
    })
}

/// Exact number of positive solutions (n ≤ 2).
///
/// # Safety
/// `sys` must be a live handle; `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fnx_count_positive(sys: *const FnxSystem, count: *mut usize) -> FnxStatus {
    guard(|| {
        if sys.is_null() || count.is_null() {
            return Err(null());
        }
        *count = count_system_exact(&(*sys).inner, precision_from_env()).map_err(lift)?.count;
        Ok(())
    })
}

/// Counts both sides of the Gale bijection. Returns `CheckFailed` when they disagree,
/// after still filling the two counts.
///
/// # Safety
/// `sys` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fnx_verify_bijection(sys: *const FnxSystem, seed: u64, original: *mut usize, gale: *mut usize) -> FnxStatus {
    guard(|| {
        if sys.is_null() || original.is_null() || gale.is_null() {
            return Err(null());
        }
        let rep = verify_bijection(&(*sys).inner, seed, precision_from_env()).map_err(lift)?;
        *original = rep.original.count;
        *gale = rep.gale.count;
        if rep.passed() {
            Ok(())
        } else {
            Err((FnxStatus::CheckFailed, format!("bijection check failed: counts {} vs {}", rep.original.count, rep.gale.count)))
        }
    })
}

/// Gale dual as JSON {"A", "B", "perm", "nW"}; free with `fnx_string_free`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fnx_gale_dual_json(sys: *const FnxSystem, out: *mut *mut c_char) -> FnxStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            return Err(null());
        }
        let g = gale_dual(&(*sys).inner).map_err(lift)?;
        write_string(out, g.to_json())
    })
}

/// The new fewnomial bound for (n, k): its value and the largest count it allows.
///
/// # Safety
/// `value` and `cap` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fnx_new_bound(n: u64, k: u64, value: *mut f64, cap: *mut u64) -> FnxStatus {
    guard(|| {
        if value.is_null() || cap.is_null() {
            return Err(null());
        }
        let b = new_fewnomial_bound(n, k, None).map_err(lift)?;
        *value = b.value_f64();
        *cap = b.cap_u64();
        Ok(())
    })
}

/// Every bound formula at (n, k) as a JSON array; free with `fnx_string_free`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fnx_bounds_json(n: u64, k: u64, out: *mut *mut c_char) -> FnxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let rows = bounds_table(&[n], &[k]).map_err(lift)?;
        let v: Vec<serde_json::Value> = rows.iter().map(|r| r.bound.to_json()).collect();
        write_string(out, serde_json::Value::Array(v).to_string())
    })
}
