//! Drives the C surface the way a foreign binding would: everything goes
//! through the extern functions, with strings crossing as C strings.

use branchlab_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn run_json(json: &str, out_dir: Option<&str>) -> (BlStatus, *mut BlRun) {
    let json = CString::new(json).unwrap();
    let out_dir = out_dir.map(|d| CString::new(d).unwrap());
    let mut run: *mut BlRun = ptr::null_mut();
    let status = unsafe {
        bl_scenario_run_json(
            json.as_ptr(),
            out_dir.as_ref().map_or(ptr::null(), |d| d.as_ptr()),
            &mut run,
        )
    };
    (status, run)
}

fn take_string(raw: *mut std::ffi::c_char) -> Option<String> {
    if raw.is_null() {
        return None;
    }
    let text = unsafe { CStr::from_ptr(raw) }.to_str().ok().map(String::from);
    unsafe { bl_string_free(raw) };
    text
}

#[test]
fn version_and_entropy() {
    let version = unsafe { CStr::from_ptr(bl_version()) }.to_str().unwrap();
    assert!(!version.is_empty());
    assert_eq!(bl_binary_entropy(0.5), 1.0);
    assert_eq!(bl_binary_entropy(0.0), 0.0);
    assert!(bl_binary_entropy(1.5).is_nan());
}

#[test]
fn run_scenario_in_memory() {
    let (status, run) = run_json(
        r#"{
            "name": "ffi_evolve",
            "experiment": "evolve",
            "params": {
                "spec": {"variant": "replicating", "outcome_count": 2, "replication": [3, 1]},
                "steps": 2
            },
            "outputs": {"json": "should_not_be_written.json"}
        }"#,
        None,
    );
    assert_eq!(status, BlStatus::Ok);
    assert_eq!(bl_status_exit_code(status), 0);
    let report = take_string(unsafe { bl_run_report_json(run) }).unwrap();
    assert!(report.contains("\"total_multiplicity\": \"16\""));
    let experiment = take_string(unsafe { bl_run_experiment(run) }).unwrap();
    assert_eq!(experiment, "evolve");
    // no out_dir means no files on disk
    assert_eq!(unsafe { bl_run_file_count(run) }, 0);
    assert!(!std::path::Path::new("should_not_be_written.json").exists());
    unsafe { bl_run_free(run) };
}

#[test]
fn run_scenario_writing_files() {
    let dir = tempfile::tempdir().unwrap();
    let (status, run) = run_json(
        r#"{
            "name": "ffi_caring",
            "experiment": "caring_weights",
            "params": {"tree": [[[], []], [], []]},
            "outputs": {"json": "caring.json"}
        }"#,
        Some(dir.path().to_str().unwrap()),
    );
    assert_eq!(status, BlStatus::Ok);
    assert_eq!(unsafe { bl_run_file_count(run) }, 1);
    let path = take_string(unsafe { bl_run_file_path(run, 0) }).unwrap();
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"1/6\""));
    assert!(take_string(unsafe { bl_run_file_path(run, 9) }).is_none());
    unsafe { bl_run_free(run) };
}

#[test]
fn error_paths_set_status_and_message() {
    let (status, run) = run_json("{not json", None);
    assert_eq!(status, BlStatus::ParseError);
    assert!(run.is_null());
    assert_eq!(bl_status_exit_code(status), 2);
    let message = take_string(bl_last_error()).unwrap();
    assert!(message.contains("parse"));

    let (status, _) = run_json(
        r#"{
            "name": "bad_weights",
            "experiment": "evolve",
            "params": {
                "spec": {"variant": "decorated", "outcome_count": 2, "weights": ["1/2", "1/3"]},
                "steps": 1
            }
        }"#,
        None,
    );
    assert_eq!(status, BlStatus::ValidationError);

    let (status, _) = run_json(
        r#"{
            "name": "too_big",
            "experiment": "evolve",
            "params": {
                "spec": {"variant": "weightless", "outcome_count": 4},
                "steps": 60,
                "capacity": 10
            }
        }"#,
        None,
    );
    assert_eq!(status, BlStatus::CapacityError);
    assert_eq!(bl_status_exit_code(status), 3);

    let mut run: *mut BlRun = ptr::null_mut();
    let status = unsafe { bl_scenario_run_json(ptr::null(), ptr::null(), &mut run) };
    assert_eq!(status, BlStatus::NullPointer);
}

#[test]
fn missing_file_is_io_error() {
    let path = CString::new("/nonexistent/scenario.json").unwrap();
    let mut run: *mut BlRun = ptr::null_mut();
    let status = unsafe { bl_scenario_run_file(path.as_ptr(), ptr::null(), &mut run) };
    assert_eq!(status, BlStatus::IoError);
    assert!(run.is_null());
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/branchlab.h"
    ))
    .expect("cbindgen header present");
    for symbol in [
        "bl_version",
        "bl_scenario_run_json",
        "bl_scenario_run_file",
        "bl_run_report_json",
        "bl_run_free",
        "bl_string_free",
        "bl_last_error",
        "typedef struct BlRun BlRun;",
    ] {
        assert!(header.contains(symbol), "header is missing {symbol}");
    }
}
