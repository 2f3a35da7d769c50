//! C ABI over `toric-okounkov`.
//!
//! Every fallible call returns an [`OkbStatus`]; on failure the message is
//! available from [`okb_last_error`] on the same thread. Strings handed out
//! by the library must be released with [`okb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use toric_okounkov::exact::{format_rational, parse_rational, Rat};
use toric_okounkov::fan::Fan;
use toric_okounkov::io::{run_str, Command, FanSpec, JobOptions};
use toric_okounkov::lattice::LatticeVector;
use toric_okounkov::okounkov::{s_t_invariants, ToricDivisor};
use toric_okounkov::{Error, ErrorKind};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OkbStatus {
    Ok = 0,
    Internal = 1,
    Validation = 2,
    Mathematical = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
}

/// Opaque validated fan.
pub struct OkbFan {
    fan: Arc<Fan>,
}

/// Opaque torus-invariant divisor on a fan.
pub struct OkbDivisor {
    divisor: ToricDivisor,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: &Error) -> OkbStatus {
    set_error(format!("{}: {e}", e.name()));
    match e.kind() {
        ErrorKind::Validation => OkbStatus::Validation,
        ErrorKind::Mathematical => OkbStatus::Mathematical,
        ErrorKind::Internal => OkbStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> OkbStatus) -> OkbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            OkbStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, OkbStatus> {
    if p.is_null() {
        set_error("null argument".into());
        return Err(OkbStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        OkbStatus::InvalidUtf8
    })
}

unsafe fn emit(out: *mut *mut c_char, s: String) -> OkbStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return OkbStatus::NullArgument;
    }
    *out = CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw();
    OkbStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message of the last failure on this thread, or null. Owned by the
/// library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn okb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn okb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs a named job (`"delta"`, `"flag-s"`, ...) on JSON input and writes
/// the JSON report to `*out`. The report is written for failed jobs too.
///
/// # Safety
/// `command` and `input` are NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn okb_run_json(
    command: *const c_char,
    input: *const c_char,
    precision: u32,
    out: *mut *mut c_char,
) -> OkbStatus {
    guard(|| {
        let name = tri!(read_str(command));
        let text = tri!(read_str(input));
        let Some(cmd) = Command::from_name(name) else {
            return fail(&Error::InvalidInput(format!("unknown command {name:?}")));
        };
        let o = run_str(cmd, text, &JobOptions { precision, candidates: Vec::new() });
        let status = match o.exit_code {
            0 => OkbStatus::Ok,
            2 => OkbStatus::Validation,
            3 => OkbStatus::Mathematical,
            _ => OkbStatus::Internal,
        };
        if status != OkbStatus::Ok {
            set_error(o.report.clone());
        }
        let w = emit(out, o.report);
        if w != OkbStatus::Ok {
            return w;
        }
        status
    })
}

/// Builds a fan from a JSON fan description: a corpus name such as
/// `"\"P2\""` or `{"rank":..,"rays":..,"cones":..}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn okb_fan_from_json(json: *const c_char, out: *mut *mut OkbFan) -> OkbStatus {
    guard(|| {
        let text = tri!(read_str(json));
        if out.is_null() {
            set_error("null output pointer".into());
            return OkbStatus::NullArgument;
        }
        let built = serde_json::from_str::<FanSpec>(text)
            .map_err(|e| Error::Parse(e.to_string()))
            .and_then(|s| s.build());
        match built {
            Ok(fan) => {
                *out = Box::into_raw(Box::new(OkbFan { fan: Arc::new(fan) }));
                OkbStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `fan` is null or a live handle from [`okb_fan_from_json`].
#[no_mangle]
pub unsafe extern "C" fn okb_fan_free(fan: *mut OkbFan) {
    if !fan.is_null() {
        drop(Box::from_raw(fan));
    }
}

/// # Safety
/// `fan` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn okb_fan_rank(fan: *const OkbFan) -> usize {
    fan.as_ref().map_or(0, |f| f.fan.rank)
}

/// # Safety
/// `fan` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn okb_fan_ray_count(fan: *const OkbFan) -> usize {
    fan.as_ref().map_or(0, |f| f.fan.rays.len())
}

/// Divisor with one rational coefficient (`"p/q"`) per ray.
///
/// # Safety
/// `fan` is a live handle; `coefficients` points to `len` strings.
#[no_mangle]
pub unsafe extern "C" fn okb_divisor_new(
    fan: *const OkbFan,
    coefficients: *const *const c_char,
    len: usize,
    out: *mut *mut OkbDivisor,
) -> OkbStatus {
    guard(|| {
        let Some(fan) = fan.as_ref() else {
            set_error("null fan".into());
            return OkbStatus::NullArgument;
        };
        if out.is_null() || (coefficients.is_null() && len > 0) {
            set_error("null argument".into());
            return OkbStatus::NullArgument;
        }
        let mut coeffs: Vec<Rat> = Vec::with_capacity(len);
        for i in 0..len {
            let s = tri!(read_str(*coefficients.add(i)));
            match parse_rational(s) {
                Ok(r) => coeffs.push(r),
                Err(e) => return fail(&e),
            }
        }
        match ToricDivisor::new(fan.fan.clone(), coeffs) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(OkbDivisor { divisor: d }));
                OkbStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// # Safety
/// `d` is null or a live handle from [`okb_divisor_new`].
#[no_mangle]
pub unsafe extern "C" fn okb_divisor_free(d: *mut OkbDivisor) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Volume of the moment polytope as `"p/q"`.
///
/// # Safety
/// `d` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn okb_divisor_volume(d: *const OkbDivisor, out: *mut *mut c_char) -> OkbStatus {
    guard(|| {
        let Some(d) = d.as_ref() else {
            set_error("null divisor".into());
            return OkbStatus::NullArgument;
        };
        match d.divisor.volume() {
            Ok(v) => emit(out, format_rational(&v)),
            Err(e) => fail(&e),
        }
    })
}

/// S- and T-invariants along the primitive vector `v` of length `len`.
///
/// # Safety
/// `d` is a live handle; `v` points to `len` integers; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn okb_divisor_s_t(
    d: *const OkbDivisor,
    v: *const i64,
    len: usize,
    out_s: *mut *mut c_char,
    out_t: *mut *mut c_char,
) -> OkbStatus {
    guard(|| {
        let Some(d) = d.as_ref() else {
            set_error("null divisor".into());
            return OkbStatus::NullArgument;
        };
        if v.is_null() || out_s.is_null() || out_t.is_null() {
            set_error("null argument".into());
            return OkbStatus::NullArgument;
        }
        let vec = LatticeVector::from_i64(std::slice::from_raw_parts(v, len));
        match s_t_invariants(&d.divisor, &vec) {
            Ok((s, t)) => {
                let st = emit(out_s, format_rational(&s));
                if st != OkbStatus::Ok {
                    return st;
                }
                emit(out_t, format_rational(&t))
            }
            Err(e) => fail(&e),
        }
    })
}
