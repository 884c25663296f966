//! C ABI over the scenario runner. Callers hand in scenario JSON (or a
//! file path), get back an opaque run handle, and read the report out of
//! it as a JSON string. All strings cross the boundary as NUL-terminated
//! UTF-8; everything returned as `char *` must be released with
//! [`bl_string_free`], and every run handle with [`bl_run_free`].

use branchlab::coding::binary_entropy;
use branchlab::exact::rat_from_f64;
use branchlab::scenario::{self, RunOptions, RunOutput, ScenarioError};
use std::cell::RefCell;
use std::ffi::{c_char, c_double, c_int, CStr, CString};
use std::path::{Path, PathBuf};
use std::ptr;

/// Outcome of an FFI call. Anything other than `Ok` leaves a diagnostic
/// retrievable through [`bl_last_error`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ValidationError = 4,
    CapacityError = 5,
    IoError = 6,
    UnknownKind = 7,
    Panic = 8,
}

/// A finished scenario run. Opaque; read it through the accessors.
pub struct BlRun {
    output: RunOutput,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

fn clear_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

fn status_of(err: &ScenarioError) -> BlStatus {
    match err {
        ScenarioError::Parse(_) => BlStatus::ParseError,
        ScenarioError::Validation(_) => BlStatus::ValidationError,
        ScenarioError::Capacity(_) => BlStatus::CapacityError,
        ScenarioError::Io { .. } => BlStatus::IoError,
        ScenarioError::UnknownKind(_) => BlStatus::UnknownKind,
    }
}

/// # Safety
/// `s` must be a valid NUL-terminated string or NULL.
unsafe fn optional_str<'a>(s: *const c_char) -> Result<Option<&'a str>, BlStatus> {
    if s.is_null() {
        return Ok(None);
    }
    match CStr::from_ptr(s).to_str() {
        Ok(text) => Ok(Some(text)),
        Err(_) => Err(BlStatus::InvalidUtf8),
    }
}

fn export_string(s: &str) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn finish_run(
    result: Result<RunOutput, ScenarioError>,
    out_run: *mut *mut BlRun,
) -> BlStatus {
    match result {
        Ok(output) => {
            clear_error();
            let handle = Box::new(BlRun { output });
            unsafe { *out_run = Box::into_raw(handle) };
            BlStatus::Ok
        }
        Err(err) => {
            let status = status_of(&err);
            set_error(err.to_string());
            status
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn bl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Binary entropy in bits of a probability in [0, 1]; NaN outside.
#[no_mangle]
pub extern "C" fn bl_binary_entropy(p: c_double) -> c_double {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    match rat_from_f64(p) {
        Some(rat) => binary_entropy(&rat),
        None => f64::NAN,
    }
}

/// Exit code the command-line runner would use for this status: 0 for
/// success, 3 for capacity refusals, 2 otherwise.
#[no_mangle]
pub extern "C" fn bl_status_exit_code(status: BlStatus) -> c_int {
    match status {
        BlStatus::Ok => 0,
        BlStatus::CapacityError => 3,
        _ => 2,
    }
}

/// Runs a scenario given inline JSON. `out_dir` may be NULL, in which case
/// no report files are written; the report is still available from the
/// returned handle. On success `*out_run` owns the run.
///
/// # Safety
/// `scenario_json` must be a valid NUL-terminated string; `out_dir` must
/// be NULL or a valid NUL-terminated string; `out_run` must be a valid
/// pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn bl_scenario_run_json(
    scenario_json: *const c_char,
    out_dir: *const c_char,
    out_run: *mut *mut BlRun,
) -> BlStatus {
    if out_run.is_null() || scenario_json.is_null() {
        set_error("null pointer argument".into());
        return BlStatus::NullPointer;
    }
    *out_run = ptr::null_mut();
    let json = match optional_str(scenario_json) {
        Ok(Some(s)) => s,
        Ok(None) => unreachable!("checked above"),
        Err(status) => {
            set_error("scenario JSON is not valid UTF-8".into());
            return status;
        }
    };
    let out_dir = match optional_str(out_dir) {
        Ok(dir) => dir.map(PathBuf::from),
        Err(status) => {
            set_error("out_dir is not valid UTF-8".into());
            return status;
        }
    };
    let result = std::panic::catch_unwind(|| {
        let options = RunOptions {
            out_dir: out_dir.clone(),
            ..Default::default()
        };
        // scenarios without an out_dir run purely in memory
        let mut scenario = scenario::parse_scenario(json)?;
        if options.out_dir.is_none() {
            scenario.outputs = Default::default();
        }
        scenario::run_scenario(&scenario, &options)
    });
    match result {
        Ok(run) => finish_run(run, out_run),
        Err(_) => {
            set_error("internal panic while running scenario".into());
            BlStatus::Panic
        }
    }
}

/// Runs a scenario file from disk, writing outputs next to the current
/// directory or under `out_dir` when given.
///
/// # Safety
/// `path` must be a valid NUL-terminated string; `out_dir` NULL or valid;
/// `out_run` a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn bl_scenario_run_file(
    path: *const c_char,
    out_dir: *const c_char,
    out_run: *mut *mut BlRun,
) -> BlStatus {
    if out_run.is_null() || path.is_null() {
        set_error("null pointer argument".into());
        return BlStatus::NullPointer;
    }
    *out_run = ptr::null_mut();
    let path = match optional_str(path) {
        Ok(Some(s)) => PathBuf::from(s),
        Ok(None) => unreachable!("checked above"),
        Err(status) => {
            set_error("path is not valid UTF-8".into());
            return status;
        }
    };
    let out_dir = match optional_str(out_dir) {
        Ok(dir) => dir.map(PathBuf::from),
        Err(status) => {
            set_error("out_dir is not valid UTF-8".into());
            return status;
        }
    };
    let result = std::panic::catch_unwind(|| {
        let options = RunOptions {
            out_dir,
            ..Default::default()
        };
        scenario::run_scenario_file(Path::new(&path), &options)
    });
    match result {
        Ok(run) => finish_run(run, out_run),
        Err(_) => {
            set_error("internal panic while running scenario".into());
            BlStatus::Panic
        }
    }
}

/// The run's report document as pretty-printed JSON; free the result with
/// [`bl_string_free`]. NULL if `run` is NULL.
///
/// # Safety
/// `run` must be a live handle from a `bl_scenario_run_*` call or NULL.
#[no_mangle]
pub unsafe extern "C" fn bl_run_report_json(run: *const BlRun) -> *mut c_char {
    if run.is_null() {
        return ptr::null_mut();
    }
    let run = &*run;
    export_string(&run.output.report_json)
}

/// The experiment kind executed by the run; free with [`bl_string_free`].
///
/// # Safety
/// `run` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bl_run_experiment(run: *const BlRun) -> *mut c_char {
    if run.is_null() {
        return ptr::null_mut();
    }
    let run = &*run;
    export_string(run.output.experiment)
}

/// Number of report files the run wrote.
///
/// # Safety
/// `run` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bl_run_file_count(run: *const BlRun) -> usize {
    if run.is_null() {
        return 0;
    }
    let run = &*run;
    run.output.files.len()
}

/// Path of the index-th written file; NULL when out of range. Free with
/// [`bl_string_free`].
///
/// # Safety
/// `run` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn bl_run_file_path(run: *const BlRun, index: usize) -> *mut c_char {
    if run.is_null() {
        return ptr::null_mut();
    }
    let run = &*run;
    match run.output.files.get(index) {
        Some(path) => export_string(&path.to_string_lossy()),
        None => ptr::null_mut(),
    }
}

/// Releases a run handle. NULL is a no-op.
///
/// # Safety
/// `run` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn bl_run_free(run: *mut BlRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not freed
/// before.
#[no_mangle]
pub unsafe extern "C" fn bl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The last error message on this thread; NULL when the last call
/// succeeded. Free with [`bl_string_free`].
#[no_mangle]
pub extern "C" fn bl_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => export_string(msg.to_str().unwrap_or("invalid error")),
        None => ptr::null_mut(),
    })
}
