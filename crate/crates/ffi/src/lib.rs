//! C ABI for `bh-core`.
//!
//! Covers live behind the opaque [`BhCover`] handle. Every fallible call
//! returns a [`BhStatus`]; on failure the message is available from
//! [`bh_last_error`]. Strings returned through out-parameters are owned by
//! the caller and must be released with [`bh_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bh_core::graphcover::build_cover;
use bh_core::io::{read_cover, read_graph, to_pretty_json};
use bh_core::lifting::wcl_decision;
use bh_core::report::Report;
use bh_core::verdict::{self, SearchData, Status, Verdict};
use bh_core::{Error, MonodromyCover};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or data that does not describe a valid cover or graph.
    InvalidInput = 3,
    /// The operation does not apply to this cover.
    NotApplicable = 4,
    /// The orbit search exceeded its class limit.
    LimitExceeded = 5,
    Internal = 6,
}

/// Birman–Hilden status reported by [`bh_verdict`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BhVerdictStatus {
    Holds = 0,
    Fails = 10,
    Inconclusive = 20,
}

/// Opaque handle to a validated cover.
pub struct BhCover {
    inner: MonodromyCover,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> BhStatus {
    match e {
        Error::OrbitLimitExceeded(_) => BhStatus::LimitExceeded,
        Error::NotApplicable(_)
        | Error::NonNegativeEuler(_)
        | Error::UnsupportedSignature(_)
        | Error::TooFewBranchPoints(_) => BhStatus::NotApplicable,
        _ => BhStatus::InvalidInput,
    }
}

fn fail(e: Error) -> BhStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `f`, converting panics into [`BhStatus::Internal`].
fn guard(f: impl FnOnce() -> BhStatus) -> BhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal error");
            BhStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, BhStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(BhStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        BhStatus::InvalidUtf8
    })
}

unsafe fn cover_ref<'a>(cover: *const BhCover) -> Result<&'a MonodromyCover, BhStatus> {
    if cover.is_null() {
        set_error("null cover handle");
        return Err(BhStatus::NullPointer);
    }
    Ok(&(*cover).inner)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> BhStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            BhStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            BhStatus::Internal
        }
    }
}

unsafe fn emit_json<T: serde::Serialize>(value: &T, out: *mut *mut c_char) -> BhStatus {
    match to_pretty_json(value) {
        Ok(s) => write_string(out, s),
        Err(e) => fail(e),
    }
}

unsafe fn new_cover(cover: MonodromyCover, out: *mut *mut BhCover) -> BhStatus {
    *out = Box::into_raw(Box::new(BhCover { inner: cover }));
    BhStatus::Ok
}

/// Parses and validates a cover file. On success `*out` holds a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bh_cover_from_json(json: *const c_char, out: *mut *mut BhCover) -> BhStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return BhStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match read_cover(text) {
            Ok(c) => new_cover(c, out),
            Err(e) => fail(e),
        }
    })
}

/// Builds the cover of the twice-branched torus attached to a graph file.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bh_cover_from_graph_json(json: *const c_char, out: *mut *mut BhCover) -> BhStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return BhStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match read_graph(text).and_then(|g| build_cover(&g)) {
            Ok(c) => new_cover(c, out),
            Err(e) => fail(e),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `cover` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bh_cover_free(cover: *mut BhCover) {
    if !cover.is_null() {
        drop(Box::from_raw(cover));
    }
}

/// Number of sheets, or 0 for a null handle.
///
/// # Safety
/// `cover` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bh_cover_degree(cover: *const BhCover) -> usize {
    cover_ref(cover).map(MonodromyCover::degree).unwrap_or(0)
}

/// Euler characteristic and genus of the total space.
///
/// # Safety
/// `cover` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_cover_total_space(cover: *const BhCover, euler: *mut i64, genus: *mut i64) -> BhStatus {
    guard(|| {
        let c = match cover_ref(cover) {
            Ok(c) => c,
            Err(s) => return s,
        };
        if euler.is_null() || genus.is_null() {
            set_error("null out pointer");
            return BhStatus::NullPointer;
        }
        *euler = c.euler_characteristic_total();
        *genus = c.total_genus();
        BhStatus::Ok
    })
}

/// The cover in its JSON file format.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bh_cover_to_json(cover: *const BhCover, out: *mut *mut c_char) -> BhStatus {
    guard(|| {
        let c = match cover_ref(cover) {
            Ok(c) => c,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null out pointer");
            return BhStatus::NullPointer;
        }
        emit_json(c, out)
    })
}

/// Full analysis report as JSON. The digest covers the cover JSON as re-serialized here.
///
/// # Safety
/// `cover` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bh_analyze(cover: *const BhCover, limit: usize, out: *mut *mut c_char) -> BhStatus {
    guard(|| {
        let c = match cover_ref(cover) {
            Ok(c) => c,
            Err(s) => return s,
        };
        if out.is_null() {
            set_error("null out pointer");
            return BhStatus::NullPointer;
        }
        let input = match to_pretty_json(c) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        match Report::new(input.as_bytes(), c, &SearchData::default(), limit) {
            Ok(r) => emit_json(&r, out),
            Err(e) => fail(e),
        }
    })
}

/// Birman–Hilden verdict. `*status` receives the outcome and `*out` the verdict JSON.
///
/// # Safety
/// `cover` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_verdict(
    cover: *const BhCover,
    limit: usize,
    status: *mut BhVerdictStatus,
    out: *mut *mut c_char,
) -> BhStatus {
    guard(|| {
        let c = match cover_ref(cover) {
            Ok(c) => c,
            Err(s) => return s,
        };
        if out.is_null() || status.is_null() {
            set_error("null out pointer");
            return BhStatus::NullPointer;
        }
        match bh_verdict_impl(c, limit) {
            Ok((s, v)) => {
                *status = s;
                emit_json(&v, out)
            }
            Err(e) => fail(e),
        }
    })
}

fn bh_verdict_impl(c: &MonodromyCover, limit: usize) -> Result<(BhVerdictStatus, Verdict), Error> {
    let v = verdict::bh_verdict(c, &SearchData::default(), limit)?;
    let s = match v.status {
        Status::Holds => BhVerdictStatus::Holds,
        Status::Fails => BhVerdictStatus::Fails,
        Status::Inconclusive => BhVerdictStatus::Inconclusive,
    };
    Ok((s, v))
}

/// Weak curve lifting decision for a genus-0 base. `*holds` is 1 or 0.
///
/// # Safety
/// `cover` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bh_wcl(cover: *const BhCover, limit: usize, holds: *mut i32, out: *mut *mut c_char) -> BhStatus {
    guard(|| {
        let c = match cover_ref(cover) {
            Ok(c) => c,
            Err(s) => return s,
        };
        if out.is_null() || holds.is_null() {
            set_error("null out pointer");
            return BhStatus::NullPointer;
        }
        match wcl_decision(c, limit) {
            Ok(outcome) => {
                *holds = i32::from(outcome.holds());
                emit_json(&outcome, out)
            }
            Err(e) => fail(e),
        }
    })
}

/// Message of the last failure on this thread, or null. Free with [`bh_string_free`].
#[no_mangle]
pub extern "C" fn bh_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
