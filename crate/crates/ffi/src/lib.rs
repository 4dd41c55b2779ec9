//! C ABI for `moduli-sys`.
//!
//! Systems and Markov sequences live behind opaque handles created from JSON and released
//! with the matching `_free` function. Every fallible call returns an [`MsStatus`]; on
//! failure `ms_last_error_message` describes the error on the calling thread. Strings
//! handed out by the library are released with [`ms_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use moduli_sys::counting::{census, count_cc_formula, count_co_formula, CensusOptions, Locus};
use moduli_sys::grassmann::{gamma, locus_membership, psi};
use moduli_sys::io::{
    grassmann_to_json, infinite_point_to_json, matrix_to_json, parse_markov, parse_system, system_to_json,
};
use moduli_sys::kalman::{canonical_form, kalman_code};
use moduli_sys::realization::realize;
use moduli_sys::{Error, LinearSystem, MarkovSequence, QuiverRep, StabilityWeight, SubrepMode};
use serde_json::json;

/// Opaque linear system `(A, B, C)`.
pub struct MsSystem {
    inner: LinearSystem,
}

/// Opaque Markov parameter sequence.
pub struct MsMarkov {
    inner: MarkovSequence,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    NotPrime = 4,
    ShapeMismatch = 5,
    FieldMismatch = 6,
    DimensionMismatch = 7,
    IndexOutOfRange = 8,
    InvalidMultiIndex = 9,
    SingularBaseChange = 10,
    NotControllable = 11,
    RankDeficient = 12,
    NotInLocus = 13,
    NonzeroThetaAlpha = 14,
    OracleTooLarge = 15,
    CensusTooLarge = 16,
    InsufficientData = 17,
    NotStabilized = 18,
    InconsistentData = 19,
    Io = 20,
    Internal = 99,
}

impl From<&Error> for MsStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotPrime(_) => MsStatus::NotPrime,
            Error::ShapeMismatch { .. } => MsStatus::ShapeMismatch,
            Error::FieldMismatch => MsStatus::FieldMismatch,
            Error::DimensionMismatch(_) | Error::NonSquareSelection { .. } => MsStatus::DimensionMismatch,
            Error::IndexOutOfRange { .. } => MsStatus::IndexOutOfRange,
            Error::InvalidMultiIndex(_) => MsStatus::InvalidMultiIndex,
            Error::SingularBaseChange => MsStatus::SingularBaseChange,
            Error::NotControllable { .. } => MsStatus::NotControllable,
            Error::RankDeficient { .. } => MsStatus::RankDeficient,
            Error::NotInLocus => MsStatus::NotInLocus,
            Error::NonzeroThetaAlpha(_) => MsStatus::NonzeroThetaAlpha,
            Error::OracleTooLarge { .. } => MsStatus::OracleTooLarge,
            Error::CensusTooLarge { .. } => MsStatus::CensusTooLarge,
            Error::InsufficientData { .. } => MsStatus::InsufficientData,
            Error::NotStabilized => MsStatus::NotStabilized,
            Error::InconsistentData(_) => MsStatus::InconsistentData,
            Error::Parse(_) | Error::Json(_) => MsStatus::Parse,
            Error::Io(_) => MsStatus::Io,
        }
    }
}

/// Classification of a system, see [`ms_system_classify`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MsSystemClass {
    pub cc: bool,
    pub co: bool,
    pub canonical: bool,
    pub rank_c: usize,
    pub rank_o: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(MsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(MsStatus::from(&e), format!("{}: {e}", e.code()))
    }
}

/// Runs `body`, converting errors and panics to a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> MsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MsStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(MsStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure(MsStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(MsStatus::NullPointer, "null handle".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(MsStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(MsStatus::Internal, "string contains nul".into()))?;
    write_out(out, c.into_raw())
}

fn to_json_string(v: serde_json::Value) -> String {
    serde_json::to_string(&v).expect("serializable")
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn ms_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a system from JSON.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_system_from_json(json: *const c_char, out: *mut *mut MsSystem) -> MsStatus {
    guard(|| {
        let sys = parse_system(read_str(json)?)?;
        write_out(out, Box::into_raw(Box::new(MsSystem { inner: sys })))
    })
}

/// Releases a system handle. Null is ignored.
///
/// # Safety
/// `sys` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_system_free(sys: *mut MsSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Serializes a system to JSON.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_system_to_json(sys: *const MsSystem, out: *mut *mut c_char) -> MsStatus {
    guard(|| {
        let sys = &deref(sys)?.inner;
        write_string(out, serde_json::to_string(&system_to_json(sys)).expect("serializable"))
    })
}

/// Writes `(m, n, p)`.
///
/// # Safety
/// `sys` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ms_system_dims(sys: *const MsSystem, m: *mut usize, n: *mut usize, p: *mut usize) -> MsStatus {
    guard(|| {
        let (dm, dn, dp) = deref(sys)?.inner.dims();
        write_out(m, dm)?;
        write_out(n, dn)?;
        write_out(p, dp)
    })
}

/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_system_classify(sys: *const MsSystem, out: *mut MsSystemClass) -> MsStatus {
    guard(|| {
        let c = deref(sys)?.inner.classify();
        write_out(out, MsSystemClass { cc: c.cc, co: c.co, canonical: c.canonical, rank_c: c.rank_c, rank_o: c.rank_o })
    })
}

/// Whether the associated quiver representation is simple.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_system_is_simple(sys: *const MsSystem, out: *mut bool) -> MsStatus {
    guard(|| {
        let simple = QuiverRep::new(&deref(sys)?.inner).is_simple_with(SubrepMode::RankCriterion)?;
        write_out(out, simple)
    })
}

/// Stability with respect to the weight `(theta1, theta2)`, which must vanish on `(1, n)`.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_system_is_theta_stable(
    sys: *const MsSystem,
    theta1: i64,
    theta2: i64,
    out: *mut bool,
) -> MsStatus {
    guard(|| {
        let rep = QuiverRep::new(&deref(sys)?.inner);
        let stable = rep.is_theta_stable_with(StabilityWeight::new(theta1, theta2), SubrepMode::RankCriterion)?;
        write_out(out, stable)
    })
}

/// Kalman canonical form as a new handle; the base change `g` goes to `g_json` unless null.
///
/// # Safety
/// `sys` must be a live handle, `out` a valid pointer, `g_json` valid or null.
#[no_mangle]
pub unsafe extern "C" fn ms_canonical_form(
    sys: *const MsSystem,
    out: *mut *mut MsSystem,
    g_json: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        let cf = canonical_form(&deref(sys)?.inner)?;
        if !g_json.is_null() {
            write_string(g_json, to_json_string(json!(matrix_to_json(&cf.g))))?;
        }
        write_out(out, Box::into_raw(Box::new(MsSystem { inner: cf.system })))
    })
}

/// Kalman code as JSON `{"m", "n", "j", "p"}` with 1-based columns.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_kalman_code_json(sys: *const MsSystem, out: *mut *mut c_char) -> MsStatus {
    guard(|| {
        let code = kalman_code(&deref(sys)?.inner)?;
        write_string(out, serde_json::to_string(&code.to_json()).expect("serializable"))
    })
}

/// Grassmannian embeddings as JSON `{"psi", "gamma", "locus", "stratum"}`.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_embed_json(sys: *const MsSystem, out: *mut *mut c_char) -> MsStatus {
    guard(|| {
        let sys = &deref(sys)?.inner;
        let psi_point = if sys.is_cc() && sys.n() > 0 { Some(psi(sys)?) } else { None };
        let g = gamma(sys)?;
        let locus = locus_membership(&g, sys.m(), sys.p())?;
        let v = json!({
            "psi": psi_point.as_ref().map(grassmann_to_json),
            "gamma": infinite_point_to_json(&g),
            "locus": locus,
            "stratum": locus.in_cc.then(|| g.stratum()),
        });
        write_string(out, to_json_string(v))
    })
}

/// Closed-form number of controllable (`observable == false`) or observable systems up
/// to base change over `F_q`, as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_count_formula(
    observable: bool,
    m: usize,
    n: usize,
    p: usize,
    q: u64,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        moduli_sys::Field::prime(q)?;
        let count = if observable { count_co_formula(m, n, p, q) } else { count_cc_formula(m, n, p, q) };
        write_string(out, count.to_string())
    })
}

/// Census by enumeration, as a JSON report. `bound` caps the enumeration (0 = default).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_census_json(
    observable: bool,
    m: usize,
    n: usize,
    p: usize,
    q: u64,
    bound: u64,
    out: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        let mut opts = CensusOptions::default();
        if bound > 0 {
            opts.bound = bound as u128;
        }
        let locus = if observable { Locus::Observable } else { Locus::Controllable };
        let report = census(locus, m, n, p, q, opts)?;
        write_string(out, serde_json::to_string(&report).expect("serializable"))
    })
}

/// Parses a Markov sequence from JSON.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_markov_from_json(json: *const c_char, out: *mut *mut MsMarkov) -> MsStatus {
    guard(|| {
        let seq = parse_markov(read_str(json)?)?;
        write_out(out, Box::into_raw(Box::new(MsMarkov { inner: seq })))
    })
}

/// Releases a Markov handle. Null is ignored.
///
/// # Safety
/// `seq` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ms_markov_free(seq: *mut MsMarkov) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Realizes a canonical system reproducing the sequence.
///
/// # Safety
/// `seq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ms_realize(seq: *const MsMarkov, out: *mut *mut MsSystem) -> MsStatus {
    guard(|| {
        let sys = realize(&deref(seq)?.inner)?;
        write_out(out, Box::into_raw(Box::new(MsSystem { inner: sys })))
    })
}
