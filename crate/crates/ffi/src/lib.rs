//! C ABI over `coindet`.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `_free` function. Every fallible call returns a [`CoindetStatus`]; on
//! failure the message is available from [`coindet_last_error_message`] on
//! the same thread. Panics are caught at the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use coindet::dga::{validate, Dga, DgaPresentation};
use coindet::fixtures;
use coindet::homology::{HomologyClass, HomologyError, HomologyStructure};
use coindet::massey::{self, MasseyError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoindetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidDga = 4,
    UnknownFixture = 5,
    /// The mathematics refused: undefined bracket, non-cycle input, degree
    /// out of range. The message starts with a reason code.
    Refused = 6,
    Panic = 7,
    Internal = 8,
}

/// Homology of a validated DGA.
pub struct CoindetHomology {
    inner: HomologyStructure,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

type Failure = (CoindetStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CoindetStatus {
    guard_noted(|| f().map(|()| String::new()))
}

/// Like [`guard`], but a successful call may leave a message behind.
fn guard_noted(f: impl FnOnce() -> Result<String, Failure>) -> CoindetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(note)) => {
            set_error(note);
            CoindetStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside coindet");
            CoindetStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((CoindetStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (CoindetStatus::InvalidUtf8, e.to_string()))
}

fn out_ptr<T>(p: *mut T) -> Result<(), Failure> {
    if p.is_null() {
        Err((CoindetStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

unsafe fn handle<'a>(h: *const CoindetHomology) -> Result<&'a HomologyStructure, Failure> {
    h.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| (CoindetStatus::NullPointer, "null homology handle".into()))
}

fn build(p: DgaPresentation) -> Result<Box<CoindetHomology>, Failure> {
    let dga = Dga::new(p).map_err(|e| (CoindetStatus::InvalidDga, e.to_string()))?;
    Ok(Box::new(CoindetHomology {
        inner: HomologyStructure::new(dga),
    }))
}

fn refused(e: MasseyError) -> Failure {
    let status = match e {
        MasseyError::Inconsistent(_) => CoindetStatus::Internal,
        _ => CoindetStatus::Refused,
    };
    (status, format!("{}: {e}", e.reason_code()))
}

unsafe fn classes<const K: usize>(
    h: &HomologyStructure,
    texts: [*const c_char; K],
) -> Result<Vec<HomologyClass>, Failure> {
    let mut out = Vec::with_capacity(K);
    for t in texts {
        let t = text(t)?;
        let u = h
            .dga()
            .parse_element(t)
            .map_err(|e| (CoindetStatus::ParseError, format!("`{t}`: {e}")))?;
        let c = h.class_of(&u).map_err(|e| match e {
            HomologyError::NotACycle { .. } => (CoindetStatus::Refused, format!("not-a-cycle: {e}")),
            HomologyError::Unavailable { .. } => (CoindetStatus::Refused, format!("degree-unavailable: {e}")),
            e => (CoindetStatus::Internal, e.to_string()),
        })?;
        out.push(c);
    }
    Ok(out)
}

/// Message for the last failing call on this thread; empty after a success.
/// Valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn coindet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses and validates presentation text.
///
/// # Safety
/// `text_ptr` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coindet_homology_from_text(
    text_ptr: *const c_char,
    out: *mut *mut CoindetHomology,
) -> CoindetStatus {
    guard(|| {
        out_ptr(out)?;
        let src = text(text_ptr)?;
        let p: DgaPresentation = src.parse().map_err(|e| (CoindetStatus::ParseError, format!("{e}")))?;
        *out = Box::into_raw(build(p)?);
        Ok(())
    })
}

/// Loads a shipped fixture such as `"A"` or `"A_prime"`.
///
/// # Safety
/// `name` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coindet_homology_from_fixture(
    name: *const c_char,
    out: *mut *mut CoindetHomology,
) -> CoindetStatus {
    guard(|| {
        out_ptr(out)?;
        let name = text(name)?;
        let p = fixtures::fixture(name).map_err(|e| (CoindetStatus::UnknownFixture, e.to_string()))?;
        *out = Box::into_raw(build(p)?);
        Ok(())
    })
}

/// # Safety
/// `h` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn coindet_homology_free(h: *mut CoindetHomology) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Whether presentation text parses and passes validation. A parse failure
/// is reported through the status, a validation failure through `out_valid`
/// with the violations left in the error message.
///
/// # Safety
/// `text_ptr` must be a valid NUL-terminated string and `out_valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coindet_validate_text(text_ptr: *const c_char, out_valid: *mut bool) -> CoindetStatus {
    guard_noted(|| {
        out_ptr(out_valid)?;
        let src = text(text_ptr)?;
        let p: DgaPresentation = src.parse().map_err(|e| (CoindetStatus::ParseError, format!("{e}")))?;
        let report = validate(&p);
        *out_valid = report.passed();
        Ok(if report.passed() { String::new() } else { report.to_string() })
    })
}

/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coindet_homology_dim(h: *const CoindetHomology, degree: i32, out: *mut usize) -> CoindetStatus {
    guard(|| {
        out_ptr(out)?;
        let h = handle(h)?;
        *out = h
            .dim(degree)
            .map_err(|e| (CoindetStatus::Refused, format!("degree-unavailable: {e}")))?;
        Ok(())
    })
}

/// Whether `⟨c0, c1, c2⟩` contains zero. Arguments are chain polynomials.
///
/// # Safety
/// `h` must be a live handle, the strings valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coindet_triple_contains_zero(
    h: *const CoindetHomology,
    c0: *const c_char,
    c1: *const c_char,
    c2: *const c_char,
    out: *mut bool,
) -> CoindetStatus {
    guard(|| {
        out_ptr(out)?;
        let h = handle(h)?;
        let s = classes(h, [c0, c1, c2])?;
        let t = massey::triple_bracket(h, &s[0], &s[1], &s[2]).map_err(refused)?;
        *out = t.contains_zero();
        Ok(())
    })
}

/// Whether the coindeterminacy of four cycles contains zero.
///
/// # Safety
/// `h` must be a live handle, the strings valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coindet_coindet_contains_zero(
    h: *const CoindetHomology,
    c0: *const c_char,
    c1: *const c_char,
    c2: *const c_char,
    c3: *const c_char,
    out: *mut bool,
) -> CoindetStatus {
    guard(|| {
        out_ptr(out)?;
        let h = handle(h)?;
        let s = classes(h, [c0, c1, c2, c3])?;
        let c = massey::coindeterminacy(h, &s[0], &s[1], &s[2], &s[3]).map_err(refused)?;
        *out = c.contains_zero;
        Ok(())
    })
}

/// Whether `⟨c0, c1, c2, c3⟩` is defined.
///
/// # Safety
/// `h` must be a live handle, the strings valid and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn coindet_fourfold_defined(
    h: *const CoindetHomology,
    c0: *const c_char,
    c1: *const c_char,
    c2: *const c_char,
    c3: *const c_char,
    out: *mut bool,
) -> CoindetStatus {
    guard(|| {
        out_ptr(out)?;
        let h = handle(h)?;
        let s = classes(h, [c0, c1, c2, c3])?;
        let (defined, _) = massey::is_fourfold_defined(h, &s[0], &s[1], &s[2], &s[3]).map_err(refused)?;
        *out = defined;
        Ok(())
    })
}

/// Runs a command-line invocation (without the program name) and returns
/// its output, e.g. `{"fourfold", "A.dga", "a0", "a1", "a2", "a3", "--json"}`.
/// The string must be released with [`coindet_string_free`]. The command's
/// exit code goes to `out_exit`; the status only reflects the call itself.
///
/// # Safety
/// `argv` must point to `argc` valid NUL-terminated strings; `out` and
/// `out_exit` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn coindet_run_command(
    argv: *const *const c_char,
    argc: usize,
    out: *mut *mut c_char,
    out_exit: *mut i32,
) -> CoindetStatus {
    guard(|| {
        out_ptr(out)?;
        out_ptr(out_exit)?;
        if argv.is_null() && argc > 0 {
            return Err((CoindetStatus::NullPointer, "null argv".into()));
        }
        let mut args = vec!["coindet".to_string()];
        for i in 0..argc {
            args.push(text(*argv.add(i))?.to_string());
        }
        let outcome = coindet::cli::run(args);
        let body = if outcome.stdout.is_empty() { outcome.stderr } else { outcome.stdout };
        *out = CString::new(body.replace('\0', " ")).expect("nul bytes removed").into_raw();
        *out_exit = outcome.code;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn coindet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
