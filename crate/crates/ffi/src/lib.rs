//! C ABI over the jetbracket engine. Handles are opaque; every string the
//! library returns must be released with `jb_string_free`.

use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jetbracket::cli::{self, adhoc, ProblemFile, Report, RunOptions};

/// Result codes. 0 to 3 coincide with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JbStatus {
    Ok = 0,
    Negative = 1,
    ParseError = 2,
    CertificateFailure = 3,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

/// A parsed problem file.
pub struct JbProblem(ProblemFile);

/// The outcome of running a problem.
pub struct JbReport(Report);

fn to_c_string(s: String) -> *mut c_char {
    // Interior NULs cannot occur in generated text, but never panic over one.
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, JbStatus> {
    if p.is_null() {
        return Err(JbStatus::NullPointer);
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| JbStatus::InvalidUtf8)
}

fn guard(f: impl FnOnce() -> JbStatus) -> JbStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(JbStatus::Panic)
}

unsafe fn set_error(error_out: *mut *mut c_char, message: String) {
    if !error_out.is_null() {
        *error_out = to_c_string(message);
    }
}

fn status_of(code: i32) -> JbStatus {
    match code {
        0 => JbStatus::Ok,
        1 => JbStatus::Negative,
        3 => JbStatus::CertificateFailure,
        _ => JbStatus::ParseError,
    }
}

/// Parses a problem file. On success `*out` receives a handle to free with
/// `jb_problem_free`. On a parse error `*error_out` (if non-null) receives
/// a message of the form `line:column: message`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable;
/// `error_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn jb_problem_parse(
    text: *const c_char,
    out: *mut *mut JbProblem,
    error_out: *mut *mut c_char,
) -> JbStatus {
    guard(|| {
        if out.is_null() {
            return JbStatus::NullPointer;
        }
        *out = ptr::null_mut();
        if !error_out.is_null() {
            *error_out = ptr::null_mut();
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match cli::parse(text) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(JbProblem(p)));
                JbStatus::Ok
            }
            Err(e) => {
                set_error(error_out, e.to_string());
                JbStatus::ParseError
            }
        }
    })
}

/// Runs every check. Pass 0 for `samples` or `budget` to use the defaults.
/// The returned status is the report's exit code.
///
/// # Safety
/// `problem` must come from `jb_problem_parse`; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jb_problem_run(
    problem: *const JbProblem,
    seed: u64,
    samples: usize,
    budget: usize,
    out: *mut *mut JbReport,
) -> JbStatus {
    guard(|| {
        if problem.is_null() || out.is_null() {
            return JbStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let defaults = RunOptions::default();
        let options = RunOptions {
            seed,
            samples: if samples == 0 {
                defaults.samples
            } else {
                samples
            },
            budget: if budget == 0 { defaults.budget } else { budget },
        };
        let report = cli::run(&(*problem).0, options);
        let status = status_of(report.exit_code);
        *out = Box::into_raw(Box::new(JbReport(report)));
        status
    })
}

/// Default sampling seed of the command-line tool.
#[no_mangle]
pub extern "C" fn jb_default_seed() -> u64 {
    jetbracket::sampling::DEFAULT_SEED
}

/// # Safety
/// `report` must come from `jb_problem_run` or be null (returns -1).
#[no_mangle]
pub unsafe extern "C" fn jb_report_exit_code(report: *const JbReport) -> c_int {
    if report.is_null() {
        return -1;
    }
    (*report).0.exit_code
}

/// JSON report; free with `jb_string_free`. Null on a null handle.
///
/// # Safety
/// `report` must come from `jb_problem_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn jb_report_json(report: *const JbReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    catch_unwind(AssertUnwindSafe(|| to_c_string((*report).0.to_json()))).unwrap_or(ptr::null_mut())
}

/// Human-readable report; free with `jb_string_free`.
///
/// # Safety
/// `report` must come from `jb_problem_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn jb_report_text(report: *const JbReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    catch_unwind(AssertUnwindSafe(|| to_c_string((*report).0.to_text()))).unwrap_or(ptr::null_mut())
}

unsafe fn algebra(
    f: fn(&str) -> jetbracket::Result<String>,
    input: *const c_char,
    out: *mut *mut c_char,
) -> JbStatus {
    guard(|| {
        if out.is_null() {
            return JbStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let input = match read_str(input) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match f(input) {
            Ok(s) => {
                *out = to_c_string(s);
                JbStatus::Ok
            }
            Err(e) => {
                *out = to_c_string(e.to_string());
                JbStatus::ParseError
            }
        }
    })
}

/// Formal adjoint of each operator line in `input` (an optional
/// `vars x[n], u[m]` line first). On error `*out` holds the message.
///
/// # Safety
/// `input` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jb_adjoint(input: *const c_char, out: *mut *mut c_char) -> JbStatus {
    algebra(adhoc::adjoint, input, out)
}

/// Composition of the operator lines in `input`, first line outermost.
///
/// # Safety
/// As for `jb_adjoint`.
#[no_mangle]
pub unsafe extern "C" fn jb_compose(input: *const c_char, out: *mut *mut c_char) -> JbStatus {
    algebra(adhoc::compose, input, out)
}

/// Principal symbol of each operator line in `input`.
///
/// # Safety
/// As for `jb_adjoint`.
#[no_mangle]
pub unsafe extern "C" fn jb_symbol(input: *const c_char, out: *mut *mut c_char) -> JbStatus {
    algebra(adhoc::symbol, input, out)
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn jb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `p` must come from `jb_problem_parse` or be null.
#[no_mangle]
pub unsafe extern "C" fn jb_problem_free(p: *mut JbProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `r` must come from `jb_problem_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn jb_report_free(r: *mut JbReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
