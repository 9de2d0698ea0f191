//! C interface to the verification suite.
//!
//! A `KgSession` owns a suite configuration, the reports of the last run and
//! the message of the last error. Strings returned as `char *` are owned by
//! the caller and released with `kg_string_free`; `kg_last_error` returns a
//! pointer owned by the session that stays valid until the next call on it.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kgalilei::cli::{self, Format, Group, SuiteConfig};
use kgalilei::ncpoly::{parse_element, Truncation};
use kgalilei::report::CheckReport;
use kgalilei::Error;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KgStatus {
    Ok = 0,
    /// The call ran but at least one check failed.
    CheckFailed = 1,
    Usage = 2,
    Parse = 3,
    /// Precondition or domain violation, including the real-mass condition.
    Domain = 4,
    Io = 5,
    NullPointer = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KgGroup {
    Hopf = 0,
    Cocycle = 1,
    Nogo = 2,
    Rep = 3,
    Contract = 4,
    Appendix = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KgFormat {
    Json = 0,
    Csv = 1,
}

pub struct KgSession {
    config: SuiteConfig,
    reports: Vec<CheckReport>,
    last_error: CString,
}

fn status_of(e: &Error) -> KgStatus {
    match e {
        Error::Usage(_) => KgStatus::Usage,
        Error::Parse(_) | Error::Serde(_) => KgStatus::Parse,
        Error::Precondition(_) | Error::MassDomain(_) | Error::Domain(_) | Error::PolicyMismatch(..) => KgStatus::Domain,
        Error::Io(_) => KgStatus::Io,
    }
}

impl KgSession {
    fn fail(&mut self, status: KgStatus, msg: String) -> KgStatus {
        self.last_error = CString::new(msg.replace('\0', " ")).unwrap_or_default();
        status
    }

    fn guard(&mut self, f: impl FnOnce(&mut Self) -> Result<KgStatus, Error>) -> KgStatus {
        self.last_error = CString::default();
        match catch_unwind(AssertUnwindSafe(|| f(self))) {
            Ok(Ok(s)) => s,
            Ok(Err(e)) => self.fail(status_of(&e), e.to_string()),
            Err(_) => self.fail(KgStatus::Internal, "internal panic".into()),
        }
    }
}

unsafe fn session<'a>(s: *mut KgSession) -> Option<&'a mut KgSession> {
    s.as_mut()
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(Error::Usage("null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Error::Parse("argument is not UTF-8".into()))
}

fn into_raw(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// New session with the default configuration.
#[no_mangle]
pub extern "C" fn kg_session_new() -> *mut KgSession {
    Box::into_raw(Box::new(KgSession { config: SuiteConfig::default(), reports: Vec::new(), last_error: CString::default() }))
}

/// # Safety
/// `s` must come from `kg_session_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kg_session_free(s: *mut KgSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Replaces the configuration with one parsed from TOML text.
///
/// # Safety
/// `s` must be a live session and `toml` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kg_session_load_config(s: *mut KgSession, toml: *const c_char) -> KgStatus {
    let Some(s) = session(s) else { return KgStatus::NullPointer };
    s.guard(|s| {
        s.config = SuiteConfig::from_toml(text(toml)?)?;
        Ok(KgStatus::Ok)
    })
}

/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn kg_session_set_seed(s: *mut KgSession, seed: u64) -> KgStatus {
    let Some(s) = session(s) else { return KgStatus::NullPointer };
    s.config.seed = seed;
    KgStatus::Ok
}

/// Runs one check group, replacing the stored reports. Returns
/// `KG_STATUS_CHECK_FAILED` when any check failed; `failed` receives the count.
///
/// # Safety
/// `s` must be a live session; `failed` may be null.
#[no_mangle]
pub unsafe extern "C" fn kg_run_group(s: *mut KgSession, group: KgGroup, failed: *mut usize) -> KgStatus {
    let Some(s) = session(s) else { return KgStatus::NullPointer };
    let g = match group {
        KgGroup::Hopf => Group::Hopf,
        KgGroup::Cocycle => Group::Cocycle,
        KgGroup::Nogo => Group::Nogo,
        KgGroup::Rep => Group::Rep,
        KgGroup::Contract => Group::Contract,
        KgGroup::Appendix => Group::Appendix,
    };
    s.guard(|s| {
        s.reports = cli::run_group(g, &s.config)?;
        let n = s.reports.iter().filter(|r| r.failed()).count();
        if !failed.is_null() {
            *failed = n;
        }
        Ok(if n == 0 { KgStatus::Ok } else { KgStatus::CheckFailed })
    })
}

/// Number of reports from the last run.
///
/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn kg_report_count(s: *const KgSession) -> usize {
    s.as_ref().map_or(0, |s| s.reports.len())
}

/// Reports of the last run rendered as JSON or CSV; free with `kg_string_free`.
///
/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn kg_reports_render(s: *mut KgSession, format: KgFormat) -> *mut c_char {
    let Some(s) = session(s) else { return ptr::null_mut() };
    let f = match format {
        KgFormat::Json => Format::Json,
        KgFormat::Csv => Format::Csv,
    };
    match cli::render(&s.reports, f) {
        Ok(t) => into_raw(t),
        Err(e) => {
            s.fail(status_of(&e), e.to_string());
            ptr::null_mut()
        }
    }
}

/// Normal form of an expression at truncation `(order, degree)`.
///
/// # Safety
/// `s` must be a live session, `expr` a NUL-terminated string and `out` a
/// valid pointer; on success `*out` must be released with `kg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn kg_eval(s: *mut KgSession, expr: *const c_char, order: u32, degree: u32, out: *mut *mut c_char) -> KgStatus {
    let Some(s) = session(s) else { return KgStatus::NullPointer };
    if out.is_null() {
        return s.fail(KgStatus::NullPointer, "null output pointer".into());
    }
    s.guard(|_| {
        let e = parse_element(text(expr)?, Truncation::new(order, degree))?;
        *out = into_raw(e.to_string());
        Ok(KgStatus::Ok)
    })
}

/// Contraction mass m = −(k/2c²) ln(1 − 2Mc²/k).
///
/// # Safety
/// `s` must be a live session and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kg_mass_of(s: *mut KgSession, mass: f64, k: f64, c: f64, out: *mut f64) -> KgStatus {
    let Some(s) = session(s) else { return KgStatus::NullPointer };
    if out.is_null() {
        return s.fail(KgStatus::NullPointer, "null output pointer".into());
    }
    s.guard(|_| {
        *out = kgalilei::contraction::mass_of(mass, k, c)?;
        Ok(KgStatus::Ok)
    })
}

/// Message of the last failed call on `s`, or an empty string.
///
/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn kg_last_error(s: *const KgSession) -> *const c_char {
    match s.as_ref() {
        Some(s) => s.last_error.as_ptr(),
        None => c"null session".as_ptr(),
    }
}

/// # Safety
/// `p` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn kg_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn kg_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"unknown",
    };
    V.as_ptr()
}
