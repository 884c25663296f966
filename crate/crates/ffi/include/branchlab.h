#ifndef BRANCHLAB_H
#define BRANCHLAB_H

/* Generated by cbindgen from branchlab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an FFI call. Anything other than `Ok` leaves a diagnostic
 * retrievable through [`bl_last_error`].
 */
typedef enum BlStatus {
  BL_STATUS_OK = 0,
  BL_STATUS_NULL_POINTER = 1,
  BL_STATUS_INVALID_UTF8 = 2,
  BL_STATUS_PARSE_ERROR = 3,
  BL_STATUS_VALIDATION_ERROR = 4,
  BL_STATUS_CAPACITY_ERROR = 5,
  BL_STATUS_IO_ERROR = 6,
  BL_STATUS_UNKNOWN_KIND = 7,
  BL_STATUS_PANIC = 8,
} BlStatus;

/**
 * A finished scenario run. Opaque; read it through the accessors.
 */
typedef struct BlRun BlRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *bl_version(void);

/**
 * Binary entropy in bits of a probability in [0, 1]; NaN outside.
 */
double bl_binary_entropy(double p);

/**
 * Exit code the command-line runner would use for this status: 0 for
 * success, 3 for capacity refusals, 2 otherwise.
 */
int bl_status_exit_code(enum BlStatus status);

/**
 * Runs a scenario given inline JSON. `out_dir` may be NULL, in which case
 * no report files are written; the report is still available from the
 * returned handle. On success `*out_run` owns the run.
 *
 * # Safety
 * `scenario_json` must be a valid NUL-terminated string; `out_dir` must
 * be NULL or a valid NUL-terminated string; `out_run` must be a valid
 * pointer to writable storage.
 */
enum BlStatus bl_scenario_run_json(const char *scenario_json,
                                   const char *out_dir,
                                   struct BlRun **out_run);

/**
 * Runs a scenario file from disk, writing outputs next to the current
 * directory or under `out_dir` when given.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string; `out_dir` NULL or valid;
 * `out_run` a valid pointer to writable storage.
 */
enum BlStatus bl_scenario_run_file(const char *path, const char *out_dir, struct BlRun **out_run);

/**
 * The run's report document as pretty-printed JSON; free the result with
 * [`bl_string_free`]. NULL if `run` is NULL.
 *
 * # Safety
 * `run` must be a live handle from a `bl_scenario_run_*` call or NULL.
 */
char *bl_run_report_json(const struct BlRun *run);

/**
 * The experiment kind executed by the run; free with [`bl_string_free`].
 *
 * # Safety
 * `run` must be a live handle or NULL.
 */
char *bl_run_experiment(const struct BlRun *run);

/**
 * Number of report files the run wrote.
 *
 * # Safety
 * `run` must be a live handle or NULL.
 */
uintptr_t bl_run_file_count(const struct BlRun *run);

/**
 * Path of the index-th written file; NULL when out of range. Free with
 * [`bl_string_free`].
 *
 * # Safety
 * `run` must be a live handle or NULL.
 */
char *bl_run_file_path(const struct BlRun *run, uintptr_t index);

/**
 * Releases a run handle. NULL is a no-op.
 *
 * # Safety
 * `run` must be NULL or a handle not freed before.
 */
void bl_run_free(struct BlRun *run);

/**
 * Releases a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library, not freed
 * before.
 */
void bl_string_free(char *s);

/**
 * The last error message on this thread; NULL when the last call
 * succeeded. Free with [`bl_string_free`].
 */
char *bl_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRANCHLAB_H */
