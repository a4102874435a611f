//! C ABI over `driftclt`.
//!
//! Models are opaque handles built from the same JSON configs the command line
//! accepts. Every call returns a [`DcStatus`]; on failure the message is
//! available from [`dc_last_error_message`] on the same thread. Panics are
//! caught at the boundary and reported as `DC_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use driftclt::chain::replicate_final;
use driftclt::cli::theory_report;
use driftclt::config::ModelConfig;
use driftclt::exact::{evolve_exact_with_budget, LatticeDistribution};
use driftclt::stats::{verify, Tolerances};
use driftclt::{Chain, Error, Model};

/// Status codes; 0 through 4 coincide with the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidArgument = 2,
    Degenerate = 3,
    Budget = 4,
    NullPointer = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Opaque model handle.
pub struct DcModel {
    config: ModelConfig,
    model: Model,
}

/// Limit constants. Fields that do not exist for the model are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcTheory {
    pub alpha1: f64,
    pub alpha2: f64,
    pub d1: f64,
    pub d2: f64,
    pub ell: f64,
    pub big_d: f64,
    pub variance: f64,
    /// 1 when `alpha1 > -1/2`.
    pub small_urn: i32,
    pub degenerate: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn status_of(err: &Error) -> DcStatus {
    match err.exit_code() {
        3 => DcStatus::Degenerate,
        4 => DcStatus::Budget,
        _ => DcStatus::InvalidArgument,
    }
}

fn guard<F: FnOnce() -> Result<DcStatus, (DcStatus, String)>>(f: F) -> DcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => {
            if status == DcStatus::Ok {
                set_error("");
            }
            status
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DcStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (DcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (DcStatus, String) {
    (DcStatus::NullPointer, format!("{what} is null"))
}

unsafe fn model_ref<'a>(handle: *const DcModel) -> Result<&'a DcModel, (DcStatus, String)> {
    handle.as_ref().ok_or_else(|| null("model"))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn dc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version string (static).
#[no_mangle]
pub extern "C" fn dc_version() -> *const c_char {
    static VERSION: std::sync::OnceLock<CString> = std::sync::OnceLock::new();
    VERSION.get_or_init(|| CString::new(driftclt::VERSION).expect("no nul")).as_ptr()
}

/// Builds a model from a JSON config. On success `*out` owns a handle that
/// must be released with [`dc_model_free`].
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dc_model_new(config_json: *const c_char, out: *mut *mut DcModel) -> DcStatus {
    guard(|| {
        if config_json.is_null() {
            return Err(null("config_json"));
        }
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let text = CStr::from_ptr(config_json)
            .to_str()
            .map_err(|e| (DcStatus::InvalidArgument, format!("config is not UTF-8: {e}")))?;
        let config = ModelConfig::from_json(text).map_err(lib_err)?;
        let model = config.build().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(DcModel { config, model }));
        Ok(DcStatus::Ok)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `model` must come from [`dc_model_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dc_model_free(model: *mut DcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Copies the model name, NUL-terminated, into `buf`. `*needed` receives the
/// required size including the terminator.
///
/// # Safety
/// `buf` must hold `capacity` bytes (it may be null when `capacity` is 0).
#[no_mangle]
pub unsafe extern "C" fn dc_model_name(
    model: *const DcModel,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let name = m.model.name();
        let bytes = name.as_bytes();
        if let Some(needed) = needed.as_mut() {
            *needed = bytes.len() + 1;
        }
        if capacity < bytes.len() + 1 {
            return Err((DcStatus::BufferTooSmall, format!("need {} bytes", bytes.len() + 1)));
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, bytes.len());
        *buf.add(bytes.len()) = 0;
        Ok(DcStatus::Ok)
    })
}

/// Limit constants of the model.
///
/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dc_theory(model: *const DcModel, out: *mut DcTheory) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = theory_report(&m.config).map_err(lib_err)?;
        *out = DcTheory {
            alpha1: r.alpha1,
            alpha2: r.alpha2,
            d1: r.d1,
            d2: r.d2,
            ell: r.ell.unwrap_or(f64::NAN),
            big_d: r.big_d.unwrap_or(f64::NAN),
            variance: r.variance.unwrap_or(f64::NAN),
            small_urn: r.small_urn as i32,
            degenerate: r.degenerate as i32,
        };
        Ok(DcStatus::Ok)
    })
}

/// Exact law of the raw statistic at step `n`: support points in `raw_out`,
/// masses in `prob_out`, both of length `*len_out`. Zero-mass points are
/// skipped. If `capacity` is too small, `*len_out` receives the required
/// length and `DC_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `raw_out` and `prob_out` must hold `capacity` elements; `len_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dc_exact_pmf(
    model: *const DcModel,
    n: u64,
    budget: u64,
    raw_out: *mut i64,
    prob_out: *mut f64,
    capacity: usize,
    len_out: *mut usize,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        let len_out = len_out.as_mut().ok_or_else(|| null("len_out"))?;
        let dist: LatticeDistribution<f64> = evolve_exact_with_budget(&m.model, n, budget).map_err(lib_err)?;
        let atoms: Vec<(i64, f64)> = dist.iter().filter(|(_, p)| **p != 0.0).map(|(r, p)| (r, *p)).collect();
        *len_out = atoms.len();
        if capacity < atoms.len() {
            return Err((DcStatus::BufferTooSmall, format!("need {} slots", atoms.len())));
        }
        if raw_out.is_null() || prob_out.is_null() {
            return Err(null("output buffer"));
        }
        for (i, (raw, p)) in atoms.into_iter().enumerate() {
            *raw_out.add(i) = raw;
            *prob_out.add(i) = p;
        }
        Ok(DcStatus::Ok)
    })
}

/// `reps` simulated final raw values written to `out`. Replicate `i` depends
/// only on `(seed, i)`.
///
/// # Safety
/// `out` must hold `reps` elements.
#[no_mangle]
pub unsafe extern "C" fn dc_replicate_final(
    model: *const DcModel,
    n: u64,
    reps: usize,
    seed: u64,
    out: *mut i64,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let values = replicate_final(&m.model, n, reps, seed).map_err(lib_err)?;
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
        Ok(DcStatus::Ok)
    })
}

/// Runs the Monte Carlo moment check with default tolerances. Returns
/// `DC_STATUS_OK` or `DC_STATUS_VERIFICATION_FAILED`; `*report_json`, if not
/// null, receives the full report, to be released with [`dc_string_free`].
///
/// # Safety
/// `report_json` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dc_verify(
    model: *const DcModel,
    n: u64,
    reps: usize,
    seed: u64,
    k_max: u32,
    report_json: *mut *mut c_char,
) -> DcStatus {
    guard(|| {
        let m = model_ref(model)?;
        if let Some(slot) = report_json.as_mut() {
            *slot = ptr::null_mut();
        }
        let report = verify(&m.model, n, reps, seed, k_max, &Tolerances::default()).map_err(lib_err)?;
        if let Some(slot) = report_json.as_mut() {
            let text = report.to_json();
            *slot = CString::new(text).expect("json has no nul").into_raw();
        }
        if report.passed {
            Ok(DcStatus::Ok)
        } else {
            Err((DcStatus::VerificationFailed, "moment check failed".into()))
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
