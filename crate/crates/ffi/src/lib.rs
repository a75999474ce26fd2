//! C interface to the experiment runner.
//!
//! Handles are opaque pointers created by `*_new`/`*_parse`/`rwlab_run` and
//! released with the matching `*_free`. Every fallible call returns an
//! [`RwlabStatus`]; on failure the message is kept per thread and read back
//! with [`rwlab_last_error`]. Strings cross the boundary as NUL-terminated
//! UTF-8. Output buffers follow the `snprintf` convention: the return value
//! is the full length, and at most `len − 1` bytes plus a NUL are written.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use rwlab::lab::{self, parse_assignment, ExperimentConfig, Outcome, Verdict};
use rwlab::spectral::{k_at, SpectralParam};
use rwlab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    NotConverged = 4,
    Singular = 5,
    Io = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwlabVerdict {
    Pass = 0,
    Fail = 1,
    Completed = 2,
    Unjudged = 3,
    SolverFailed = 4,
}

/// Resolved experiment configuration.
pub struct RwlabConfig {
    inner: ExperimentConfig,
}

/// Result of one experiment run.
pub struct RwlabOutcome {
    inner: Outcome,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> RwlabStatus {
    match e {
        Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::SingularPoint(_) => RwlabStatus::InvalidArgument,
        Error::NotConverged { .. } => RwlabStatus::NotConverged,
        Error::Singular(_) => RwlabStatus::Singular,
        Error::Config(_) => RwlabStatus::Config,
        Error::Format(_) | Error::Io(_) => RwlabStatus::Io,
    }
}

fn fail(status: RwlabStatus, msg: impl Into<String>) -> RwlabStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), RwlabStatus>) -> RwlabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RwlabStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned()).unwrap_or_default();
            fail(RwlabStatus::Internal, format!("panic: {msg}"))
        }
    }
}

fn lift<T>(r: rwlab::Result<T>) -> Result<T, RwlabStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, RwlabStatus> {
    if p.is_null() {
        return Err(fail(RwlabStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(RwlabStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, RwlabStatus> {
    p.as_ref().ok_or_else(|| fail(RwlabStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, RwlabStatus> {
    p.as_mut().ok_or_else(|| fail(RwlabStatus::NullPointer, format!("{what} is null")))
}

/// Copies `s` into `buf` snprintf-style and returns `s.len()`.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize) -> usize {
    if !buf.is_null() && len > 0 {
        let n = s.len().min(len - 1);
        ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), n);
        *buf.add(n) = 0;
    }
    s.len()
}

/// Message of the last failed call on this thread.
///
/// # Safety
/// `buf` is null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn rwlab_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| write_str(&e.borrow(), buf, len))
}

/// Parses a `key = value` config text; unset keys take their defaults.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rwlab_config_parse(text: *const c_char, out: *mut *mut RwlabConfig) -> RwlabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let cfg = lift(ExperimentConfig::parse(str_arg(text, "text")?))?;
        *out = Box::into_raw(Box::new(RwlabConfig { inner: cfg }));
        Ok(())
    })
}

/// Applies one `key=value` assignment, re-validating the whole config.
/// On failure the config is left unchanged.
///
/// # Safety
/// `cfg` comes from [`rwlab_config_parse`]; `assignment` is NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rwlab_config_override(cfg: *mut RwlabConfig, assignment: *const c_char) -> RwlabStatus {
    guard(|| {
        let cfg = out_ptr(cfg, "cfg")?;
        let (k, v) = lift(parse_assignment(str_arg(assignment, "assignment")?))?;
        let mut map = cfg.inner.resolved().clone();
        map.insert(k, v);
        cfg.inner = lift(ExperimentConfig::from_assignments(map))?;
        Ok(())
    })
}

/// The resolved config as `key = value` lines.
///
/// # Safety
/// `cfg` comes from [`rwlab_config_parse`]; `buf` is null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn rwlab_config_text(cfg: *const RwlabConfig, buf: *mut c_char, len: usize) -> usize {
    match cfg.as_ref() {
        Some(c) => write_str(&c.inner.resolved_text(), buf, len),
        None => 0,
    }
}

/// # Safety
/// `cfg` is null or came from [`rwlab_config_parse`] and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rwlab_config_free(cfg: *mut RwlabConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Runs the configured experiment on `threads` workers (0: one per core).
/// A solver failure inside a sweep is not an error here; it shows up as
/// [`RwlabVerdict::SolverFailed`] on the outcome.
///
/// # Safety
/// `cfg` comes from [`rwlab_config_parse`]; `out` is valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rwlab_run(cfg: *const RwlabConfig, threads: usize, out: *mut *mut RwlabOutcome) -> RwlabStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let cfg = handle(cfg, "cfg")?;
        let mut pool = rayon::ThreadPoolBuilder::new();
        if threads > 0 {
            pool = pool.num_threads(threads);
        }
        let pool = pool.build().map_err(|e| fail(RwlabStatus::Internal, e.to_string()))?;
        let outcome = lift(pool.install(|| lab::run(&cfg.inner)))?;
        *out = Box::into_raw(Box::new(RwlabOutcome { inner: outcome }));
        Ok(())
    })
}

/// # Safety
/// `outcome` comes from [`rwlab_run`].
#[no_mangle]
pub unsafe extern "C" fn rwlab_outcome_verdict(outcome: *const RwlabOutcome) -> RwlabVerdict {
    match outcome.as_ref().map(|o| o.inner.verdict()) {
        Some(Verdict::Pass) => RwlabVerdict::Pass,
        Some(Verdict::Completed) => RwlabVerdict::Completed,
        Some(Verdict::Unjudged) => RwlabVerdict::Unjudged,
        Some(Verdict::SolverFailed) => RwlabVerdict::SolverFailed,
        Some(Verdict::Fail) | None => RwlabVerdict::Fail,
    }
}

/// The main result table as CSV with a header line.
///
/// # Safety
/// `outcome` comes from [`rwlab_run`]; `buf` is null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn rwlab_outcome_table_csv(outcome: *const RwlabOutcome, buf: *mut c_char, len: usize) -> usize {
    match outcome.as_ref() {
        Some(o) => write_str(&o.inner.table.csv(), buf, len),
        None => 0,
    }
}

/// Threshold checks as CSV: `check,value,limit,pass`.
///
/// # Safety
/// As for [`rwlab_outcome_table_csv`].
#[no_mangle]
pub unsafe extern "C" fn rwlab_outcome_checks_csv(outcome: *const RwlabOutcome, buf: *mut c_char, len: usize) -> usize {
    match outcome.as_ref() {
        Some(o) => write_str(&o.inner.checks_table().csv(), buf, len),
        None => 0,
    }
}

/// The terminal summary printed by the `rwlab` binary.
///
/// # Safety
/// As for [`rwlab_outcome_table_csv`].
#[no_mangle]
pub unsafe extern "C" fn rwlab_outcome_summary(outcome: *const RwlabOutcome, buf: *mut c_char, len: usize) -> usize {
    match outcome.as_ref() {
        Some(o) => write_str(&o.inner.summary(), buf, len),
        None => 0,
    }
}

/// Node count of the last solved field, 0 if the run solved nothing.
///
/// # Safety
/// `outcome` comes from [`rwlab_run`].
#[no_mangle]
pub unsafe extern "C" fn rwlab_outcome_field_len(outcome: *const RwlabOutcome) -> usize {
    outcome.as_ref().and_then(|o| o.inner.field.as_ref()).map_or(0, |u| u.values().len())
}

/// Copies the last solved field as interleaved `(re, im)` pairs in the grid's
/// linear order, axis 0 fastest. `len` counts nodes, so `values` holds `2·len`
/// doubles and must match [`rwlab_outcome_field_len`].
///
/// # Safety
/// `outcome` comes from [`rwlab_run`]; `values` is valid for `2·len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rwlab_outcome_field_copy(outcome: *const RwlabOutcome, values: *mut f64, len: usize) -> RwlabStatus {
    guard(|| {
        let o = handle(outcome, "outcome")?;
        let u = o.inner.field.as_ref().ok_or_else(|| fail(RwlabStatus::InvalidArgument, "the run produced no field"))?;
        if u.values().len() != len {
            return Err(fail(RwlabStatus::InvalidArgument, format!("field has {} nodes, buffer {len}", u.values().len())));
        }
        if values.is_null() {
            return Err(fail(RwlabStatus::NullPointer, "values is null"));
        }
        let dst = std::slice::from_raw_parts_mut(values, 2 * len);
        for (pair, v) in dst.chunks_exact_mut(2).zip(u.values()) {
            pair[0] = v.re;
            pair[1] = v.im;
        }
        Ok(())
    })
}

/// Writes the manifest, CSVs and field file the CLI would write into `dir`.
///
/// # Safety
/// `cfg` must be the config the outcome was run with; `dir` is NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rwlab_outcome_write(cfg: *const RwlabConfig, outcome: *const RwlabOutcome, dir: *const c_char) -> RwlabStatus {
    guard(|| {
        let cfg = handle(cfg, "cfg")?;
        let o = handle(outcome, "outcome")?;
        lift(lab::write_outputs(&cfg.inner, &o.inner, Path::new(str_arg(dir, "dir")?)))
    })
}

/// # Safety
/// `outcome` is null or came from [`rwlab_run`] and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rwlab_outcome_free(outcome: *mut RwlabOutcome) {
    if !outcome.is_null() {
        drop(Box::from_raw(outcome));
    }
}

/// Local wavenumber `k` for `z = lambda + i·eta` and coefficient `mu`, with
/// `Im k ≥ 0`. At `eta = 0` the upper-half-plane limit is taken.
///
/// # Safety
/// `re` and `im` are valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rwlab_wavenumber(lambda: f64, eta: f64, mu: f64, re: *mut f64, im: *mut f64) -> RwlabStatus {
    guard(|| {
        let (re, im) = (out_ptr(re, "re")?, out_ptr(im, "im")?);
        let k = lift(SpectralParam::new(lambda, eta).and_then(|z| k_at(&z, mu)))?;
        *re = k.re;
        *im = k.im;
        Ok(())
    })
}

/// Version of the library, e.g. `"0.1.0"`. The string is static.
#[no_mangle]
pub extern "C" fn rwlab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
