//! C ABI for the linadv experiment runner.
//!
//! Configurations are opaque handles created by `linadv_config_parse` or
//! `linadv_config_default`, mutated through `linadv_config_set` with the
//! same key=value vocabulary as config files, and executed with
//! `linadv_run_to_csv`. All functions return a status code; a human
//! readable message for the most recent failure on the current thread is
//! available from `linadv_last_error`.

#![allow(non_camel_case_types)]

use linadv::output::csv_text;
use linadv::run::{execute, RunConfig, RunOutcome};
use linadv::solutions::CaseId;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

/// Status codes; nonzero values match the CLI exit codes where one
/// exists (2 config error, 3 aborted by blow-up).
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum linadv_status {
    Ok = 0,
    /// Invalid configuration, key, value, or unreadable input.
    Config = 2,
    /// The run blew up; the CSV was still written, truncated, with an
    /// abort trailer.
    Aborted = 3,
    /// I/O failure or internal error.
    Runtime = 4,
    /// A required pointer argument was null.
    NullArgument = 5,
}

/// Opaque run-configuration handle.
pub struct linadv_config {
    inner: RunConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn fail(status: linadv_status, msg: &str) -> linadv_status {
    set_error(msg);
    status
}

/// # Safety
/// `s` must be a valid NUL-terminated string or null.
unsafe fn opt_str<'a>(s: *const c_char) -> Result<Option<&'a str>, linadv_status> {
    if s.is_null() {
        return Ok(None);
    }
    match unsafe { CStr::from_ptr(s) }.to_str() {
        Ok(v) => Ok(Some(v)),
        Err(_) => {
            set_error("string argument is not valid UTF-8");
            Err(linadv_status::Config)
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn linadv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on this thread. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn linadv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Create a configuration with default settings for the named test case
/// (a_x, a_x2, a_1mx2, a_cos). On success `*out` owns the handle.
///
/// # Safety
/// `case` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn linadv_config_default(
    case: *const c_char,
    out: *mut *mut linadv_config,
) -> linadv_status {
    if out.is_null() {
        return fail(linadv_status::NullArgument, "out is null");
    }
    let Some(case) = (match unsafe { opt_str(case) } {
        Ok(v) => v,
        Err(s) => return s,
    }) else {
        return fail(linadv_status::NullArgument, "case is null");
    };
    match CaseId::parse(case) {
        Ok(id) => {
            let handle = Box::new(linadv_config {
                inner: RunConfig::default_for(id),
            });
            unsafe { *out = Box::into_raw(handle) };
            linadv_status::Ok
        }
        Err(e) => fail(linadv_status::Config, &e.to_string()),
    }
}

/// Parse key=value configuration text (same syntax as config files and
/// CSV metadata blocks). On success `*out` owns the handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn linadv_config_parse(
    text: *const c_char,
    out: *mut *mut linadv_config,
) -> linadv_status {
    if out.is_null() {
        return fail(linadv_status::NullArgument, "out is null");
    }
    let Some(text) = (match unsafe { opt_str(text) } {
        Ok(v) => v,
        Err(s) => return s,
    }) else {
        return fail(linadv_status::NullArgument, "text is null");
    };
    match RunConfig::parse(text) {
        Ok(cfg) => {
            unsafe { *out = Box::into_raw(Box::new(linadv_config { inner: cfg })) };
            linadv_status::Ok
        }
        Err(e) => fail(linadv_status::Config, &e.to_string()),
    }
}

/// Set one key to a value, e.g. ("K", "80"). Unknown keys are rejected.
///
/// # Safety
/// `cfg` must come from a constructor; `key` and `value` must be valid
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn linadv_config_set(
    cfg: *mut linadv_config,
    key: *const c_char,
    value: *const c_char,
) -> linadv_status {
    if cfg.is_null() {
        return fail(linadv_status::NullArgument, "cfg is null");
    }
    let (key, value) = match (unsafe { opt_str(key) }, unsafe { opt_str(value) }) {
        (Ok(Some(k)), Ok(Some(v))) => (k, v),
        (Err(s), _) | (_, Err(s)) => return s,
        _ => return fail(linadv_status::NullArgument, "key or value is null"),
    };
    let cfg = unsafe { &mut *cfg };
    match cfg.inner.apply_override(key, value) {
        Ok(()) => linadv_status::Ok,
        Err(e) => fail(linadv_status::Config, &e.to_string()),
    }
}

/// Canonical text form of the configuration. The returned string must be
/// released with `linadv_string_free`.
///
/// # Safety
/// `cfg` must come from a constructor; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn linadv_config_text(
    cfg: *const linadv_config,
    out: *mut *mut c_char,
) -> linadv_status {
    if cfg.is_null() || out.is_null() {
        return fail(linadv_status::NullArgument, "cfg or out is null");
    }
    let cfg = unsafe { &*cfg };
    let text = CString::new(cfg.inner.canonical_text()).expect("config text has no NUL");
    unsafe { *out = text.into_raw() };
    linadv_status::Ok
}

/// Execute the run and write its CSV. `path` overrides the config's
/// `out` key when non-null; `note` adds a metadata note line. A blow-up
/// returns `Aborted` after writing the truncated CSV.
///
/// # Safety
/// `cfg` must come from a constructor; `path` and `note` must be valid
/// NUL-terminated strings or null.
#[no_mangle]
pub unsafe extern "C" fn linadv_run_to_csv(
    cfg: *const linadv_config,
    path: *const c_char,
    note: *const c_char,
) -> linadv_status {
    if cfg.is_null() {
        return fail(linadv_status::NullArgument, "cfg is null");
    }
    let path = match unsafe { opt_str(path) } {
        Ok(v) => v,
        Err(s) => return s,
    };
    let note = match unsafe { opt_str(note) } {
        Ok(v) => v,
        Err(s) => return s,
    };
    let cfg = unsafe { &*cfg };
    let result = catch_unwind(AssertUnwindSafe(|| {
        let config = cfg.inner.clone();
        let out = execute(&config)?;
        let target = path.unwrap_or(&config.output).to_string();
        std::fs::write(Path::new(&target), csv_text(&out, note))?;
        Ok::<RunOutcome, linadv::Error>(out.outcome)
    }));
    match result {
        Ok(Ok(RunOutcome::Completed)) => linadv_status::Ok,
        Ok(Ok(RunOutcome::Aborted { t })) => {
            fail(linadv_status::Aborted, &format!("run aborted by blow-up at t={t}"))
        }
        Ok(Err(e @ linadv::Error::Io(_))) => fail(linadv_status::Runtime, &e.to_string()),
        Ok(Err(e)) => fail(linadv_status::Config, &e.to_string()),
        Err(_) => fail(linadv_status::Runtime, "internal panic during run"),
    }
}

/// Release a configuration handle. Null is a no-op.
///
/// # Safety
/// `cfg` must come from a constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn linadv_config_free(cfg: *mut linadv_config) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Release a string returned by `linadv_config_text`. Null is a no-op.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn linadv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
