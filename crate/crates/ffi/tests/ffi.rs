use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use moduli_sys_ffi::*;

const SCALAR: &str = r#"{"field":"Q","m":1,"n":1,"p":1,"A":[["2"]],"B":[["1"]],"C":[["3"]]}"#;
const UNCONTROLLABLE: &str =
    r#"{"field":{"Fp":2},"m":1,"n":2,"p":1,"A":[["1","0"],["0","1"]],"B":[["1"],["0"]],"C":[["1","1"]]}"#;

fn system(json: &str) -> *mut MsSystem {
    let text = CString::new(json).unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { ms_system_from_json(text.as_ptr(), &mut sys) }, MsStatus::Ok);
    sys
}

fn take_string(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ms_string_free(s) };
    out
}

fn last_error() -> String {
    let p = ms_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn classify_and_dims() {
    let sys = system(SCALAR);
    let mut class = MsSystemClass::default();
    assert_eq!(unsafe { ms_system_classify(sys, &mut class) }, MsStatus::Ok);
    assert!(class.cc && class.co && class.canonical);
    let (mut m, mut n, mut p) = (0, 0, 0);
    assert_eq!(unsafe { ms_system_dims(sys, &mut m, &mut n, &mut p) }, MsStatus::Ok);
    assert_eq!((m, n, p), (1, 1, 1));
    let mut simple = false;
    assert_eq!(unsafe { ms_system_is_simple(sys, &mut simple) }, MsStatus::Ok);
    assert!(simple);
    let mut stable = false;
    assert_eq!(unsafe { ms_system_is_theta_stable(sys, -1, 1, &mut stable) }, MsStatus::Ok);
    assert!(stable);
    assert_eq!(unsafe { ms_system_is_theta_stable(sys, 1, 1, &mut stable) }, MsStatus::NonzeroThetaAlpha);
    unsafe { ms_system_free(sys) };
}

#[test]
fn canonical_form_and_json_round_trip() {
    let fib = r#"{"field":"Q","m":1,"n":2,"p":1,"A":[["0","1"],["1","1"]],"B":[["0"],["1"]],"C":[["1","0"]]}"#;
    let sys = system(fib);
    let mut canon = ptr::null_mut();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ms_canonical_form(sys, &mut canon, &mut g) }, MsStatus::Ok);
    assert_eq!(take_string(g), r#"[["-1","1"],["1","0"]]"#);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ms_system_to_json(canon, &mut text) }, MsStatus::Ok);
    let text = take_string(text);
    let again = system(&text);
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { ms_kalman_code_json(again, &mut code) }, MsStatus::Ok);
    assert_eq!(take_string(code), r#"{"m":1,"n":2,"j":[1],"p":[2]}"#);
    unsafe {
        ms_system_free(again);
        ms_system_free(canon);
        ms_system_free(sys);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let sys = system(UNCONTROLLABLE);
    let mut canon = ptr::null_mut();
    assert_eq!(unsafe { ms_canonical_form(sys, &mut canon, ptr::null_mut()) }, MsStatus::NotControllable);
    assert!(canon.is_null());
    assert!(last_error().starts_with("not_controllable"));
    unsafe { ms_system_free(sys) };

    let bad = CString::new("{").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ms_system_from_json(bad.as_ptr(), &mut out) }, MsStatus::Parse);
    assert_eq!(unsafe { ms_system_from_json(ptr::null(), &mut out) }, MsStatus::NullPointer);
    let mut class = MsSystemClass::default();
    assert_eq!(unsafe { ms_system_classify(ptr::null(), &mut class) }, MsStatus::NullPointer);
    unsafe {
        ms_system_free(ptr::null_mut());
        ms_string_free(ptr::null_mut());
    }
}

#[test]
fn embedding_json() {
    let sys = system(SCALAR);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ms_embed_json(sys, &mut out) }, MsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["locus"]["in_canonical"], true);
    assert_eq!(v["stratum"], 1);
    assert_eq!(v["gamma"]["point"]["pivots"], serde_json::json!([1, 2]));
    unsafe { ms_system_free(sys) };
}

#[test]
fn counting() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ms_count_formula(false, 1, 1, 1, 2, &mut out) }, MsStatus::Ok);
    assert_eq!(take_string(out), "4");
    assert_eq!(unsafe { ms_count_formula(false, 1, 1, 1, 4, &mut out) }, MsStatus::NotPrime);
    assert_eq!(unsafe { ms_census_json(true, 2, 2, 1, 2, 0, &mut out) }, MsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(v["match"], true);
    assert_eq!(unsafe { ms_census_json(false, 2, 2, 0, 5, 10, &mut out) }, MsStatus::CensusTooLarge);
}

#[test]
fn realization() {
    let text = CString::new("[1, 1, 2, 3, 5, 8]").unwrap();
    let mut seq = ptr::null_mut();
    assert_eq!(unsafe { ms_markov_from_json(text.as_ptr(), &mut seq) }, MsStatus::Ok);
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { ms_realize(seq, &mut sys) }, MsStatus::Ok);
    let (mut m, mut n, mut p) = (0, 0, 0);
    unsafe { ms_system_dims(sys, &mut m, &mut n, &mut p) };
    assert_eq!(n, 2);
    unsafe {
        ms_system_free(sys);
        ms_markov_free(seq);
    }

    let text = CString::new("[1, 0, 0, 1]").unwrap();
    unsafe { ms_markov_from_json(text.as_ptr(), &mut seq) };
    assert_eq!(unsafe { ms_realize(seq, &mut sys) }, MsStatus::NotStabilized);
    unsafe { ms_markov_free(seq) };
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/moduli_sys.h");
    let src = format!("#include \"{header}\"\nint main(void) {{ return ms_last_error_message() == 0 ? 0 : 1; }}\n");
    let dir = std::env::temp_dir().join(format!("moduli_sys_header_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("check.c");
    std::fs::write(&file, src).unwrap();
    match Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg("-Werror").arg(&file).status() {
        Ok(status) => assert!(status.success(), "header does not compile"),
        Err(_) => eprintln!("no C compiler found, header check skipped"),
    }
    let _ = std::fs::remove_dir_all(&dir);
}
