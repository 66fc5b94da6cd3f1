//! C ABI for the Wiener-Hopf polynomial factorization pipeline.
//!
//! The interface is deliberately narrow: requests and reports travel as
//! JSON strings in the same formats the CLI uses, plus a handful of typed
//! accessors on an opaque report handle. All pointers returned by this
//! library are owned by it and must be released with the matching `_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::ptr;

use whfactor::cli::{Delta0Choice, PathChoice, RunConfig};
use whfactor::report::{InputFile, Report};
use whfactor::scalar::Precision;

/// Status codes mirroring the CLI exit classes.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WhStatus {
    /// Success.
    Ok = 0,
    /// Malformed request (bad JSON, bad flags, null pointers).
    BadRequest = 1,
    /// Input polynomial outside the method's domain.
    Validation = 2,
    /// Numerical failure; retry with higher ell or precision.
    Numerical = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Opaque factorization report.
pub struct WhReport {
    report: Report,
    json: CString,
}

/// Options of a factorization request; zero/NULL fields mean defaults.
#[repr(C)]
pub struct WhOptions {
    /// "kernel", "direct" or "both"; NULL means kernel.
    pub path: *const c_char,
    /// "native" or "ext:\<digits\>"; NULL means native.
    pub precision: *const c_char,
    /// "auto", "general", "self-inversive", "one" or a number; NULL = auto.
    pub delta0: *const c_char,
    /// Decimal string; NULL means the automatic recipe.
    pub eps_tilde: *const c_char,
    /// Decimal string; NULL takes the value from the request JSON.
    pub rho: *const c_char,
    /// Decimal string; NULL takes the value from the request JSON.
    pub delta: *const c_char,
    /// Window half-length; 0 means degree + 1.
    pub n: usize,
    /// Enable the root-based delta0 hypothesis check.
    pub oracle_check: bool,
}

unsafe fn opt_str(ptr: *const c_char) -> Result<Option<String>, WhStatus> {
    if ptr.is_null() {
        return Ok(None);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(Some(s.to_string())),
        Err(_) => Err(WhStatus::BadRequest),
    }
}

fn status_of(err: &whfactor::Error) -> WhStatus {
    match err.exit_code() {
        2 => WhStatus::Validation,
        _ => WhStatus::Numerical,
    }
}

/// Factorizes the polynomial described by `request_json`
/// (`{"coefficients": [[re, im], ...], "rho": ..., "delta": ...}`) and
/// returns an opaque report through `out`.
///
/// # Safety
/// `request_json` must be a valid NUL-terminated string; `options` may be
/// NULL or point to a valid [`WhOptions`]; `out` must be a valid pointer.
/// The report must be released with [`wh_report_free`].
#[no_mangle]
pub unsafe extern "C" fn wh_factorize_json(
    request_json: *const c_char,
    options: *const WhOptions,
    out: *mut *mut WhReport,
) -> WhStatus {
    clear_error();
    if request_json.is_null() || out.is_null() {
        set_error("null pointer argument".into());
        return WhStatus::BadRequest;
    }
    unsafe { *out = ptr::null_mut() };
    let text = match unsafe { CStr::from_ptr(request_json) }.to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("request is not valid UTF-8".into());
            return WhStatus::BadRequest;
        }
    };
    let input = match InputFile::from_json(text) {
        Ok(i) => i,
        Err(e) => {
            set_error(e.to_string());
            return WhStatus::BadRequest;
        }
    };
    let mut config = RunConfig::new(input);

    if !options.is_null() {
        let opts = unsafe { &*options };
        let fields = (|| -> Result<(), WhStatus> {
            if let Some(path) = unsafe { opt_str(opts.path) }? {
                config.path = PathChoice::parse(&path).map_err(|e| {
                    set_error(e.to_string());
                    WhStatus::BadRequest
                })?;
            }
            if let Some(precision) = unsafe { opt_str(opts.precision) }? {
                config.precision = Precision::parse(&precision).map_err(|e| {
                    set_error(e.to_string());
                    WhStatus::BadRequest
                })?;
            }
            if let Some(delta0) = unsafe { opt_str(opts.delta0) }? {
                config.delta0 = Delta0Choice::parse(&delta0).map_err(|e| {
                    set_error(e.to_string());
                    WhStatus::BadRequest
                })?;
            }
            config.eps_tilde = unsafe { opt_str(opts.eps_tilde) }?;
            if let Some(rho) = unsafe { opt_str(opts.rho) }? {
                config.rho = Some(rho);
            }
            if let Some(delta) = unsafe { opt_str(opts.delta) }? {
                config.delta = Some(delta);
            }
            if opts.n > 0 {
                config.n = Some(opts.n);
            }
            config.oracle_check = opts.oracle_check;
            Ok(())
        })();
        if let Err(status) = fields {
            if status == WhStatus::BadRequest {
                set_error("options contain invalid UTF-8".into());
            }
            return status;
        }
    }

    match whfactor::cli::run(&config) {
        Ok(report) => {
            let json = CString::new(report.to_json()).expect("report has no NUL bytes");
            let boxed = Box::new(WhReport { report, json });
            unsafe { *out = Box::into_raw(boxed) };
            WhStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            status_of(&err)
        }
    }
}

/// Serialized report; the pointer stays valid until [`wh_report_free`].
///
/// # Safety
/// `report` must be a live pointer from [`wh_factorize_json`].
#[no_mangle]
pub unsafe extern "C" fn wh_report_json(report: *const WhReport) -> *const c_char {
    if report.is_null() {
        return ptr::null();
    }
    unsafe { &*report }.json.as_ptr()
}

/// Winding number of the factorized polynomial.
///
/// # Safety
/// `report` must be a live pointer from [`wh_factorize_json`].
#[no_mangle]
pub unsafe extern "C" fn wh_report_kappa(report: *const WhReport) -> c_int {
    if report.is_null() {
        return -1;
    }
    unsafe { &*report }.report.kappa as c_int
}

/// Sampling order used for the Laurent window.
///
/// # Safety
/// `report` must be a live pointer from [`wh_factorize_json`].
#[no_mangle]
pub unsafe extern "C" fn wh_report_ell(report: *const WhReport) -> c_int {
    if report.is_null() {
        return -1;
    }
    unsafe { &*report }.report.ell as c_int
}

/// Residual `||p1 p2 - p||` as a double (lossy for extended precision).
///
/// # Safety
/// `report` must be a live pointer from [`wh_factorize_json`].
#[no_mangle]
pub unsafe extern "C" fn wh_report_residual(report: *const WhReport) -> c_double {
    if report.is_null() {
        return f64::NAN;
    }
    unsafe { &*report }
        .report
        .residual
        .parse::<f64>()
        .unwrap_or(f64::NAN)
}

/// Certified factor accuracy `eps` as a double.
///
/// # Safety
/// `report` must be a live pointer from [`wh_factorize_json`].
#[no_mangle]
pub unsafe extern "C" fn wh_report_eps(report: *const WhReport) -> c_double {
    if report.is_null() {
        return f64::NAN;
    }
    unsafe { &*report }
        .report
        .ledger
        .eps
        .parse::<f64>()
        .unwrap_or(f64::NAN)
}

/// Releases a report handle; NULL is allowed.
///
/// # Safety
/// `report` must be NULL or a pointer from [`wh_factorize_json`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn wh_report_free(report: *mut WhReport) {
    if !report.is_null() {
        drop(unsafe { Box::from_raw(report) });
    }
}

/// Message of the last error on this thread, or NULL; valid until the next
/// library call on the same thread.
#[no_mangle]
pub extern "C" fn wh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
