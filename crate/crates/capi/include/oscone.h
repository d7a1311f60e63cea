#ifndef OSCONE_H
#define OSCONE_H

/* Generated by cbindgen from the oscone-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Success / decision code zero.
#define OSCONE_OK 0

// A null pointer or otherwise invalid argument was passed.
#define OSCONE_ERR_ARGUMENT -1

// The input was not valid problem-file JSON.
#define OSCONE_ERR_PARSE -2

// The run failed (dimension mismatches, invalid payloads, solver errors).
#define OSCONE_ERR_RUN -3

// Opaque task handle: a parsed problem file plus run options.
typedef struct OsconeTask OsconeTask;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent error on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *oscone_last_error(void);

// Library version as a static string; never freed by the caller.
const char *oscone_version(void);

// Parses a problem-file JSON document into a task. On success writes the
// new handle to `out` and returns `OSCONE_OK`.
//
// # Safety
// `json` must point to a NUL-terminated string; `out` must be a valid
// location to store one pointer. The returned handle must be released with
// [`oscone_task_free`].
int32_t oscone_task_from_json(const char *json, struct OsconeTask **out);

// Sets the strictness margin substituted for strict inequalities.
//
// # Safety
// `task` must be a live handle from [`oscone_task_from_json`].
int32_t oscone_task_set_delta(struct OsconeTask *task, double delta);

// Overrides the feasibility and certificate tolerances.
//
// # Safety
// `task` must be a live handle from [`oscone_task_from_json`].
int32_t oscone_task_set_tolerance(struct OsconeTask *task, double tol);

// Caps the iteration budget of the numeric solver.
//
// # Safety
// `task` must be a live handle from [`oscone_task_from_json`].
int32_t oscone_task_set_max_iters(struct OsconeTask *task, uint64_t max_iters);

// Seeds the sampling harnesses.
//
// # Safety
// `task` must be a live handle from [`oscone_task_from_json`].
int32_t oscone_task_set_seed(struct OsconeTask *task, uint64_t seed);

// Overrides the matrix level of the problem payload.
//
// # Safety
// `task` must be a live handle from [`oscone_task_from_json`].
int32_t oscone_task_set_level(struct OsconeTask *task, uint64_t level);

// Runs the task. On success writes the JSON report to `report_out` (release
// it with [`oscone_string_free`]) and returns the decision code.
//
// # Safety
// `task` must be a live handle; `report_out` may be null when the report is
// not wanted.
int32_t oscone_task_run(const struct OsconeTask *task, char **report_out);

// Releases a task handle. Null is accepted.
//
// # Safety
// `task` must be null or a handle produced by [`oscone_task_from_json`]
// that has not been freed yet.
void oscone_task_free(struct OsconeTask *task);

// Releases a string returned by this library. Null is accepted.
//
// # Safety
// `s` must be null or a pointer previously returned through `report_out`.
void oscone_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCONE_H */
