#ifndef RWLAB_H
#define RWLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RwlabStatus {
  RWLAB_STATUS_OK = 0,
  RWLAB_STATUS_NULL_POINTER = 1,
  RWLAB_STATUS_INVALID_ARGUMENT = 2,
  RWLAB_STATUS_CONFIG = 3,
  RWLAB_STATUS_NOT_CONVERGED = 4,
  RWLAB_STATUS_SINGULAR = 5,
  RWLAB_STATUS_IO = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  RWLAB_STATUS_INTERNAL = 7,
} RwlabStatus;

typedef enum RwlabVerdict {
  RWLAB_VERDICT_PASS = 0,
  RWLAB_VERDICT_FAIL = 1,
  RWLAB_VERDICT_COMPLETED = 2,
  RWLAB_VERDICT_UNJUDGED = 3,
  RWLAB_VERDICT_SOLVER_FAILED = 4,
} RwlabVerdict;

/**
 * Resolved experiment configuration.
 */
typedef struct RwlabConfig RwlabConfig;

/**
 * Result of one experiment run.
 */
typedef struct RwlabOutcome RwlabOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread.
 *
 * # Safety
 * `buf` is null or valid for `len` bytes.
 */
size_t rwlab_last_error(char *buf, size_t len);

/**
 * Parses a `key = value` config text; unset keys take their defaults.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` is valid for one write.
 */
enum RwlabStatus rwlab_config_parse(const char *text, struct RwlabConfig **out);

/**
 * Applies one `key=value` assignment, re-validating the whole config.
 * On failure the config is left unchanged.
 *
 * # Safety
 * `cfg` comes from [`rwlab_config_parse`]; `assignment` is NUL-terminated.
 */
enum RwlabStatus rwlab_config_override(struct RwlabConfig *cfg, const char *assignment);

/**
 * The resolved config as `key = value` lines.
 *
 * # Safety
 * `cfg` comes from [`rwlab_config_parse`]; `buf` is null or valid for `len` bytes.
 */
size_t rwlab_config_text(const struct RwlabConfig *cfg, char *buf, size_t len);

/**
 * # Safety
 * `cfg` is null or came from [`rwlab_config_parse`] and is not used afterwards.
 */
void rwlab_config_free(struct RwlabConfig *cfg);

/**
 * Runs the configured experiment on `threads` workers (0: one per core).
 * A solver failure inside a sweep is not an error here; it shows up as
 * [`RwlabVerdict::SolverFailed`] on the outcome.
 *
 * # Safety
 * `cfg` comes from [`rwlab_config_parse`]; `out` is valid for one write.
 */
enum RwlabStatus rwlab_run(const struct RwlabConfig *cfg,
                           size_t threads,
                           struct RwlabOutcome **out);

/**
 * # Safety
 * `outcome` comes from [`rwlab_run`].
 */
enum RwlabVerdict rwlab_outcome_verdict(const struct RwlabOutcome *outcome);

/**
 * The main result table as CSV with a header line.
 *
 * # Safety
 * `outcome` comes from [`rwlab_run`]; `buf` is null or valid for `len` bytes.
 */
size_t rwlab_outcome_table_csv(const struct RwlabOutcome *outcome, char *buf, size_t len);

/**
 * Threshold checks as CSV: `check,value,limit,pass`.
 *
 * # Safety
 * As for [`rwlab_outcome_table_csv`].
 */
size_t rwlab_outcome_checks_csv(const struct RwlabOutcome *outcome, char *buf, size_t len);

/**
 * The terminal summary printed by the `rwlab` binary.
 *
 * # Safety
 * As for [`rwlab_outcome_table_csv`].
 */
size_t rwlab_outcome_summary(const struct RwlabOutcome *outcome, char *buf, size_t len);

/**
 * Node count of the last solved field, 0 if the run solved nothing.
 *
 * # Safety
 * `outcome` comes from [`rwlab_run`].
 */
size_t rwlab_outcome_field_len(const struct RwlabOutcome *outcome);

/**
 * Copies the last solved field as interleaved `(re, im)` pairs in the grid's
 * linear order, axis 0 fastest. `len` counts nodes, so `values` holds `2·len`
 * doubles and must match [`rwlab_outcome_field_len`].
 *
 * # Safety
 * `outcome` comes from [`rwlab_run`]; `values` is valid for `2·len` doubles.
 */
enum RwlabStatus rwlab_outcome_field_copy(const struct RwlabOutcome *outcome,
                                          double *values,
                                          size_t len);

/**
 * Writes the manifest, CSVs and field file the CLI would write into `dir`.
 *
 * # Safety
 * `cfg` must be the config the outcome was run with; `dir` is NUL-terminated.
 */
enum RwlabStatus rwlab_outcome_write(const struct RwlabConfig *cfg,
                                     const struct RwlabOutcome *outcome,
                                     const char *dir);

/**
 * # Safety
 * `outcome` is null or came from [`rwlab_run`] and is not used afterwards.
 */
void rwlab_outcome_free(struct RwlabOutcome *outcome);

/**
 * Local wavenumber `k` for `z = lambda + i·eta` and coefficient `mu`, with
 * `Im k ≥ 0`. At `eta = 0` the upper-half-plane limit is taken.
 *
 * # Safety
 * `re` and `im` are valid for one write.
 */
enum RwlabStatus rwlab_wavenumber(double lambda, double eta, double mu, double *re, double *im);

/**
 * Version of the library, e.g. `"0.1.0"`. The string is static.
 */
const char *rwlab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RWLAB_H */
