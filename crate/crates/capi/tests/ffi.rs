//! Exercises the C ABI through the exported functions, plus an end-to-end
//! compile-and-run of a small C client against the generated header.

use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};

use oscone_capi::*;

const QUOTIENT_NEG: &str = r#"{
  "schema_version": "1",
  "kind": "quotient-pos",
  "payload": {
    "k": 2, "m": 3, "level": 1,
    "blocks": [
      {"diag": [-1]}, {"diag": [0]}, {"diag": [0]}, {"diag": [0]}, {"diag": [0]}
    ],
    "margin": 0.0
  }
}"#;

const UNIT_MAX: &str = r#"{
  "schema_version": "1",
  "kind": "max-pos",
  "payload": {
    "system": {"diagonal": 2},
    "k": 1, "m": 1, "level": 1,
    "coeffs": [{"diag": [2, 2]}],
    "strict": true
  }
}"#;

fn run_json(json: &str) -> (i32, serde_json::Value) {
    let c = CString::new(json).unwrap();
    let mut task: *mut OsconeTask = std::ptr::null_mut();
    let rc = unsafe { oscone_task_from_json(c.as_ptr(), &mut task) };
    assert_eq!(rc, OSCONE_OK, "parse failed: {}", last_error());
    let mut report: *mut std::os::raw::c_char = std::ptr::null_mut();
    let code = unsafe { oscone_task_run(task, &mut report) };
    assert!(code >= 0, "run failed: {}", last_error());
    let text = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_owned();
    unsafe {
        oscone_string_free(report);
        oscone_task_free(task);
    }
    (code, serde_json::from_str(&text).expect("report JSON"))
}

fn last_error() -> String {
    let ptr = oscone_last_error();
    if ptr.is_null() {
        return "<none>".into();
    }
    unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned()
}

#[test]
fn decides_the_negative_slot_coset() {
    let (code, json) = run_json(QUOTIENT_NEG);
    assert_eq!(code, 1);
    assert_eq!(json["status"], "infeasible");
    assert!(json["certificate"].is_array());
}

#[test]
fn decides_the_strict_unit_element() {
    let (code, json) = run_json(UNIT_MAX);
    assert_eq!(code, 0);
    assert_eq!(json["status"], "feasible");
}

#[test]
fn option_setters_are_reflected_in_the_report() {
    let c = CString::new(UNIT_MAX).unwrap();
    let mut task: *mut OsconeTask = std::ptr::null_mut();
    unsafe {
        assert_eq!(oscone_task_from_json(c.as_ptr(), &mut task), OSCONE_OK);
        assert_eq!(oscone_task_set_delta(task, 1e-4), OSCONE_OK);
        assert_eq!(oscone_task_set_seed(task, 7), OSCONE_OK);
        assert_eq!(oscone_task_set_max_iters(task, 1000), OSCONE_OK);
        assert_eq!(oscone_task_set_delta(task, -1.0), OSCONE_ERR_ARGUMENT);
    }
    let mut report: *mut std::os::raw::c_char = std::ptr::null_mut();
    let code = unsafe { oscone_task_run(task, &mut report) };
    assert_eq!(code, 0);
    let json: serde_json::Value =
        serde_json::from_str(unsafe { CStr::from_ptr(report) }.to_str().unwrap()).unwrap();
    assert_eq!(json["config"]["delta"], 1e-4);
    assert_eq!(json["config"]["seed"], 7);
    assert_eq!(json["config"]["max_iters"], 1000);
    unsafe {
        oscone_string_free(report);
        oscone_task_free(task);
    }
}

#[test]
fn error_paths_return_codes_and_messages() {
    let mut task: *mut OsconeTask = std::ptr::null_mut();
    unsafe {
        assert_eq!(
            oscone_task_from_json(std::ptr::null(), &mut task),
            OSCONE_ERR_ARGUMENT
        );
        let bad = CString::new("{ nope").unwrap();
        assert_eq!(oscone_task_from_json(bad.as_ptr(), &mut task), OSCONE_ERR_PARSE);
        assert!(!oscone_last_error().is_null());
        assert_eq!(oscone_task_run(std::ptr::null(), std::ptr::null_mut()), OSCONE_ERR_ARGUMENT);

        // A structurally valid file with an impossible payload fails at run time.
        let wrong = CString::new(
            r#"{"schema_version":"1","kind":"max-pos","payload":{"system":{"diagonal":2},"k":1,"m":1,"coeffs":[{"diag":[1,2,3]}]}}"#,
        )
        .unwrap();
        let mut t2: *mut OsconeTask = std::ptr::null_mut();
        assert_eq!(oscone_task_from_json(wrong.as_ptr(), &mut t2), OSCONE_OK);
        assert_eq!(oscone_task_run(t2, std::ptr::null_mut()), OSCONE_ERR_RUN);
        oscone_task_free(t2);
    }
    // version string is readable
    let v = unsafe { CStr::from_ptr(oscone_version()) };
    assert!(!v.to_str().unwrap().is_empty());
}

#[test]
fn c_client_compiles_and_runs_against_the_header() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("oscone.h").exists(), "generated header missing");

    // The static library lands next to the test binary's profile directory.
    let profile_dir = {
        let exe = std::env::current_exe().unwrap();
        // target/debug/deps/ffi-... -> target/debug
        exe.parent().unwrap().parent().unwrap().to_path_buf()
    };
    let static_lib = profile_dir.join("liboscone_capi.a");
    assert!(static_lib.exists(), "missing {}", static_lib.display());

    let dir = std::env::temp_dir().join("oscone_capi_c_smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let c_path = dir.join("smoke.c");
    std::fs::write(
        &c_path,
        r#"
#include <stdio.h>
#include <string.h>
#include "oscone.h"

int main(void) {
    const char *json =
        "{\"schema_version\":\"1\",\"kind\":\"quotient-pos\",\"payload\":{"
        "\"k\":2,\"m\":3,\"level\":1,\"blocks\":[{\"diag\":[-1]},{\"diag\":[0]},"
        "{\"diag\":[0]},{\"diag\":[0]},{\"diag\":[0]}],\"margin\":0.0}}";
    OsconeTask *task = NULL;
    if (oscone_task_from_json(json, &task) != OSCONE_OK) return 10;
    char *report = NULL;
    int code = oscone_task_run(task, &report);
    if (code != 1) return 11;
    if (report == NULL || strstr(report, "\"infeasible\"") == NULL) return 12;
    oscone_string_free(report);
    oscone_task_free(task);
    printf("ok\n");
    return 0;
}
"#,
    )
    .unwrap();
    let exe_path = dir.join("smoke");
    let status = std::process::Command::new("cc")
        .arg(&c_path)
        .arg("-I")
        .arg(&header_dir)
        .arg(static_lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe_path)
        .status()
        .expect("invoke cc");
    assert!(status.success(), "C client failed to compile");
    let out = std::process::Command::new(&exe_path).output().expect("run C client");
    assert!(out.status.success(), "C client exit: {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");

    let _ = Path::new(&dir);
}
