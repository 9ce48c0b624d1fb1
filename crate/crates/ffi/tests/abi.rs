use std::ffi::{c_char, CStr, CString};
use std::ptr;

use coindet_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(coindet_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn fixture(name: &str) -> *mut CoindetHomology {
    let mut h = ptr::null_mut();
    let status = unsafe { coindet_homology_from_fixture(c(name).as_ptr(), &mut h) };
    assert_eq!(status, CoindetStatus::Ok, "{}", last_error());
    assert!(!h.is_null());
    h
}

fn four(h: *const CoindetHomology, f: unsafe extern "C" fn(
    *const CoindetHomology,
    *const c_char,
    *const c_char,
    *const c_char,
    *const c_char,
    *mut bool,
) -> CoindetStatus) -> (CoindetStatus, bool) {
    let args = ["a0", "a1", "a2", "a3"].map(c);
    let mut out = false;
    let status = unsafe { f(h, args[0].as_ptr(), args[1].as_ptr(), args[2].as_ptr(), args[3].as_ptr(), &mut out) };
    (status, out)
}

#[test]
fn a_is_defined_and_a_prime_is_not() {
    let a = fixture("A");
    let b = fixture("A_prime");
    assert_eq!(four(a, coindet_fourfold_defined), (CoindetStatus::Ok, true));
    assert_eq!(four(a, coindet_coindet_contains_zero), (CoindetStatus::Ok, true));
    assert_eq!(four(b, coindet_fourfold_defined), (CoindetStatus::Ok, false));
    assert_eq!(four(b, coindet_coindet_contains_zero), (CoindetStatus::Ok, false));
    unsafe {
        coindet_homology_free(a);
        coindet_homology_free(b);
    }
}

#[test]
fn dims_and_triples() {
    let a = fixture("A");
    let mut dim = 0usize;
    assert_eq!(unsafe { coindet_homology_dim(a, 1, &mut dim) }, CoindetStatus::Ok);
    assert_eq!(dim, 5);
    assert_eq!(unsafe { coindet_homology_dim(a, 5, &mut dim) }, CoindetStatus::Refused);
    assert!(last_error().starts_with("degree-unavailable"));

    let args = ["a0", "a1", "a2"].map(c);
    let mut zero = false;
    let status = unsafe { coindet_triple_contains_zero(a, args[0].as_ptr(), args[1].as_ptr(), args[2].as_ptr(), &mut zero) };
    assert_eq!(status, CoindetStatus::Ok);
    assert!(zero);

    let bad = ["a0", "a0", "a0"].map(c);
    let status = unsafe { coindet_triple_contains_zero(a, bad[0].as_ptr(), bad[1].as_ptr(), bad[2].as_ptr(), &mut zero) };
    assert_eq!(status, CoindetStatus::Refused);
    assert!(last_error().starts_with("threefold-undefined"), "{}", last_error());

    let nc = ["a01", "a1", "a2"].map(c);
    let status = unsafe { coindet_triple_contains_zero(a, nc[0].as_ptr(), nc[1].as_ptr(), nc[2].as_ptr(), &mut zero) };
    assert_eq!(status, CoindetStatus::Refused);
    assert!(last_error().starts_with("not-a-cycle"));
    unsafe { coindet_homology_free(a) };
}

#[test]
fn text_parsing_and_validation() {
    let mut valid = true;
    let bad = c("dga bad\ntruncate 3\ngen x 1\ngen t 1\ngen s 1\nd t = x*x\nd s = t*x\n");
    assert_eq!(unsafe { coindet_validate_text(bad.as_ptr(), &mut valid) }, CoindetStatus::Ok);
    assert!(!valid);
    assert!(last_error().contains("d(d(s))"));

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { coindet_homology_from_text(bad.as_ptr(), &mut h) }, CoindetStatus::InvalidDga);
    assert!(h.is_null());

    let garbled = c("dga m\ntruncate 3\ngen ?? 1\n");
    assert_eq!(unsafe { coindet_homology_from_text(garbled.as_ptr(), &mut h) }, CoindetStatus::ParseError);
    assert!(last_error().contains("line 3"));

    let good = c("dga T\ntruncate 3\ngen x 1\ngen y 1\ngen t 1\nd t = x*y\n");
    assert_eq!(unsafe { coindet_homology_from_text(good.as_ptr(), &mut h) }, CoindetStatus::Ok);
    let mut dim = 0;
    assert_eq!(unsafe { coindet_homology_dim(h, 1, &mut dim) }, CoindetStatus::Ok);
    assert_eq!(dim, 2);
    unsafe { coindet_homology_free(h) };

    let mut out = ptr::null_mut();
    let status = unsafe { coindet_homology_from_fixture(c("B").as_ptr(), &mut out) };
    assert_eq!(status, CoindetStatus::UnknownFixture);
}

#[test]
fn null_handles_and_outputs() {
    let mut dim = 0;
    assert_eq!(unsafe { coindet_homology_dim(ptr::null(), 1, &mut dim) }, CoindetStatus::NullPointer);
    let a = fixture("A");
    assert_eq!(unsafe { coindet_homology_dim(a, 1, ptr::null_mut()) }, CoindetStatus::NullPointer);
    unsafe {
        coindet_homology_free(a);
        coindet_homology_free(ptr::null_mut());
        coindet_string_free(ptr::null_mut());
    }
}

#[test]
fn run_command_returns_json() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/A_prime.dga");
    let args: Vec<CString> = ["fourfold", path, "a0", "a1", "a2", "a3", "--json"].into_iter().map(c).collect();
    let ptrs: Vec<*const c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut out = ptr::null_mut();
    let mut exit = -1;
    let status = unsafe { coindet_run_command(ptrs.as_ptr(), ptrs.len(), &mut out, &mut exit) };
    assert_eq!(status, CoindetStatus::Ok);
    assert_eq!(exit, 2);
    let body = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { coindet_string_free(out) };
    assert!(body.contains("\"reason_code\": \"fourfold-undefined\""));
    assert!(body.contains("\"defined\": false"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/coindet.h");
    for name in [
        "coindet_last_error_message",
        "coindet_homology_from_text",
        "coindet_homology_from_fixture",
        "coindet_homology_free",
        "coindet_validate_text",
        "coindet_homology_dim",
        "coindet_triple_contains_zero",
        "coindet_coindet_contains_zero",
        "coindet_fourfold_defined",
        "coindet_run_command",
        "coindet_string_free",
        "typedef struct CoindetHomology CoindetHomology",
        "COINDET_STATUS_REFUSED = 6",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
