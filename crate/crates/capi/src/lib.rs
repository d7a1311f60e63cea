//! C ABI over the decision engine: parse a problem-file JSON into an opaque
//! task, adjust solver options, run it, and collect the JSON report. All
//! functions return negative error codes on failure; `oscone_task_run`
//! returns the decision (0 feasible/true/agree, 1 infeasible/false/
//! counterexample, 2 unknown) on success. String results are heap-allocated
//! and must be released with `oscone_string_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;

use oscone::cli::{dispatch, reference_suite, ProblemFile, RunOptions};

/// Success / decision code zero.
pub const OSCONE_OK: i32 = 0;
/// A null pointer or otherwise invalid argument was passed.
pub const OSCONE_ERR_ARGUMENT: i32 = -1;
/// The input was not valid problem-file JSON.
pub const OSCONE_ERR_PARSE: i32 = -2;
/// The run failed (dimension mismatches, invalid payloads, solver errors).
pub const OSCONE_ERR_RUN: i32 = -3;

/// Opaque task handle: a parsed problem file plus run options.
pub struct OsconeTask {
    file: ProblemFile,
    options: RunOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Message for the most recent error on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oscone_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Library version as a static string; never freed by the caller.
#[no_mangle]
pub extern "C" fn oscone_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Parses a problem-file JSON document into a task. On success writes the
/// new handle to `out` and returns `OSCONE_OK`.
///
/// # Safety
/// `json` must point to a NUL-terminated string; `out` must be a valid
/// location to store one pointer. The returned handle must be released with
/// [`oscone_task_free`].
#[no_mangle]
pub unsafe extern "C" fn oscone_task_from_json(
    json: *const c_char,
    out: *mut *mut OsconeTask,
) -> i32 {
    if json.is_null() || out.is_null() {
        set_error("null argument".into());
        return OSCONE_ERR_ARGUMENT;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("problem JSON is not valid UTF-8".into());
            return OSCONE_ERR_PARSE;
        }
    };
    let file: ProblemFile = match serde_json::from_str(text) {
        Ok(f) => f,
        Err(e) => {
            set_error(format!("malformed problem file: {e}"));
            return OSCONE_ERR_PARSE;
        }
    };
    let task = Box::new(OsconeTask { file, options: RunOptions::default() });
    *out = Box::into_raw(task);
    OSCONE_OK
}

/// Sets the strictness margin substituted for strict inequalities.
///
/// # Safety
/// `task` must be a live handle from [`oscone_task_from_json`].
#[no_mangle]
pub unsafe extern "C" fn oscone_task_set_delta(task: *mut OsconeTask, delta: f64) -> i32 {
    let Some(task) = task.as_mut() else {
        set_error("null task".into());
        return OSCONE_ERR_ARGUMENT;
    };
    if !(delta > 0.0) || !delta.is_finite() {
        set_error(format!("delta must be positive and finite, got {delta}"));
        return OSCONE_ERR_ARGUMENT;
    }
    task.options.delta = delta;
    OSCONE_OK
}

/// Overrides the feasibility and certificate tolerances.
///
/// # Safety
/// `task` must be a live handle from [`oscone_task_from_json`].
#[no_mangle]
pub unsafe extern "C" fn oscone_task_set_tolerance(task: *mut OsconeTask, tol: f64) -> i32 {
    let Some(task) = task.as_mut() else {
        set_error("null task".into());
        return OSCONE_ERR_ARGUMENT;
    };
    if !(tol > 0.0) || !tol.is_finite() {
        set_error(format!("tolerance must be positive and finite, got {tol}"));
        return OSCONE_ERR_ARGUMENT;
    }
    task.options.tol = Some(tol);
    OSCONE_OK
}

/// Caps the iteration budget of the numeric solver.
///
/// # Safety
/// `task` must be a live handle from [`oscone_task_from_json`].
#[no_mangle]
pub unsafe extern "C" fn oscone_task_set_max_iters(task: *mut OsconeTask, max_iters: u64) -> i32 {
    let Some(task) = task.as_mut() else {
        set_error("null task".into());
        return OSCONE_ERR_ARGUMENT;
    };
    if max_iters == 0 {
        set_error("max_iters must be positive".into());
        return OSCONE_ERR_ARGUMENT;
    }
    task.options.max_iters = Some(max_iters as usize);
    OSCONE_OK
}

/// Seeds the sampling harnesses.
///
/// # Safety
/// `task` must be a live handle from [`oscone_task_from_json`].
#[no_mangle]
pub unsafe extern "C" fn oscone_task_set_seed(task: *mut OsconeTask, seed: u64) -> i32 {
    let Some(task) = task.as_mut() else {
        set_error("null task".into());
        return OSCONE_ERR_ARGUMENT;
    };
    task.options.seed = seed;
    OSCONE_OK
}

/// Overrides the matrix level of the problem payload.
///
/// # Safety
/// `task` must be a live handle from [`oscone_task_from_json`].
#[no_mangle]
pub unsafe extern "C" fn oscone_task_set_level(task: *mut OsconeTask, level: u64) -> i32 {
    let Some(task) = task.as_mut() else {
        set_error("null task".into());
        return OSCONE_ERR_ARGUMENT;
    };
    if level == 0 {
        set_error("level must be positive".into());
        return OSCONE_ERR_ARGUMENT;
    }
    task.options.level = Some(level as usize);
    OSCONE_OK
}

/// Runs the task. On success writes the JSON report to `report_out` (release
/// it with [`oscone_string_free`]) and returns the decision code.
///
/// # Safety
/// `task` must be a live handle; `report_out` may be null when the report is
/// not wanted.
#[no_mangle]
pub unsafe extern "C" fn oscone_task_run(
    task: *const OsconeTask,
    report_out: *mut *mut c_char,
) -> i32 {
    let Some(task) = task.as_ref() else {
        set_error("null task".into());
        return OSCONE_ERR_ARGUMENT;
    };
    let (report_json, code) = if task.file.kind == "reproduce" {
        let (value, all_pass) = reference_suite(&task.options, false);
        (value, if all_pass { 0 } else { 1 })
    } else {
        match dispatch(&task.file, &task.options) {
            Ok((report, code)) => {
                let value = serde_json::to_value(&report).unwrap_or_default();
                (value, code)
            }
            Err(e) => {
                set_error(format!("{e}"));
                return OSCONE_ERR_RUN;
            }
        }
    };
    if !report_out.is_null() {
        let text = serde_json::to_string(&report_json).unwrap_or_default();
        let c = CString::new(text.replace('\0', " ")).unwrap_or_default();
        *report_out = c.into_raw();
    }
    code
}

/// Releases a task handle. Null is accepted.
///
/// # Safety
/// `task` must be null or a handle produced by [`oscone_task_from_json`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn oscone_task_free(task: *mut OsconeTask) {
    if !task.is_null() {
        drop(Box::from_raw(task));
    }
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must be null or a pointer previously returned through `report_out`.
#[no_mangle]
pub unsafe extern "C" fn oscone_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
