#ifndef JETBRACKET_H
#define JETBRACKET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. 0 to 3 coincide with the command-line exit codes.
 */
typedef enum JbStatus {
  JB_STATUS_OK = 0,
  JB_STATUS_NEGATIVE = 1,
  JB_STATUS_PARSE_ERROR = 2,
  JB_STATUS_CERTIFICATE_FAILURE = 3,
  JB_STATUS_NULL_POINTER = 10,
  JB_STATUS_INVALID_UTF8 = 11,
  JB_STATUS_PANIC = 12,
} JbStatus;

/**
 * A parsed problem file.
 */
typedef struct JbProblem JbProblem;

/**
 * The outcome of running a problem.
 */
typedef struct JbReport JbReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a problem file. On success `*out` receives a handle to free with
 * `jb_problem_free`. On a parse error `*error_out` (if non-null) receives
 * a message of the form `line:column: message`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable;
 * `error_out` may be null.
 */
enum JbStatus jb_problem_parse(const char *text, struct JbProblem **out, char **error_out);

/**
 * Runs every check. Pass 0 for `samples` or `budget` to use the defaults.
 * The returned status is the report's exit code.
 *
 * # Safety
 * `problem` must come from `jb_problem_parse`; `out` must be writable.
 */
enum JbStatus jb_problem_run(const struct JbProblem *problem,
                             uint64_t seed,
                             size_t samples,
                             size_t budget,
                             struct JbReport **out);

/**
 * Default sampling seed of the command-line tool.
 */
uint64_t jb_default_seed(void);

/**
 * # Safety
 * `report` must come from `jb_problem_run` or be null (returns -1).
 */
int jb_report_exit_code(const struct JbReport *report);

/**
 * JSON report; free with `jb_string_free`. Null on a null handle.
 *
 * # Safety
 * `report` must come from `jb_problem_run` or be null.
 */
char *jb_report_json(const struct JbReport *report);

/**
 * Human-readable report; free with `jb_string_free`.
 *
 * # Safety
 * `report` must come from `jb_problem_run` or be null.
 */
char *jb_report_text(const struct JbReport *report);

/**
 * Formal adjoint of each operator line in `input` (an optional
 * `vars x[n], u[m]` line first). On error `*out` holds the message.
 *
 * # Safety
 * `input` must be NUL-terminated; `out` must be writable.
 */
enum JbStatus jb_adjoint(const char *input, char **out);

/**
 * Composition of the operator lines in `input`, first line outermost.
 *
 * # Safety
 * As for `jb_adjoint`.
 */
enum JbStatus jb_compose(const char *input, char **out);

/**
 * Principal symbol of each operator line in `input`.
 *
 * # Safety
 * As for `jb_adjoint`.
 */
enum JbStatus jb_symbol(const char *input, char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void jb_string_free(char *s);

/**
 * # Safety
 * `p` must come from `jb_problem_parse` or be null.
 */
void jb_problem_free(struct JbProblem *p);

/**
 * # Safety
 * `r` must come from `jb_problem_run` or be null.
 */
void jb_report_free(struct JbReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JETBRACKET_H */
