#ifndef DRIFTCLT_H
#define DRIFTCLT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; 0 through 4 coincide with the command-line exit codes.
 */
typedef enum DcStatus {
  DC_STATUS_OK = 0,
  DC_STATUS_VERIFICATION_FAILED = 1,
  DC_STATUS_INVALID_ARGUMENT = 2,
  DC_STATUS_DEGENERATE = 3,
  DC_STATUS_BUDGET = 4,
  DC_STATUS_NULL_POINTER = 5,
  DC_STATUS_BUFFER_TOO_SMALL = 6,
  DC_STATUS_INTERNAL = 7,
} DcStatus;

/**
 * Opaque model handle.
 */
typedef struct DcModel DcModel;

/**
 * Limit constants. Fields that do not exist for the model are NaN.
 */
typedef struct DcTheory {
  double alpha1;
  double alpha2;
  double d1;
  double d2;
  double ell;
  double big_d;
  double variance;
  /**
   * 1 when `alpha1 > -1/2`.
   */
  int32_t small_urn;
  int32_t degenerate;
} DcTheory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *dc_last_error_message(void);

/**
 * Library version string (static).
 */
const char *dc_version(void);

/**
 * Builds a model from a JSON config. On success `*out` owns a handle that
 * must be released with [`dc_model_free`].
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DcStatus dc_model_new(const char *config_json, struct DcModel **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `model` must come from [`dc_model_new`] and not have been freed.
 */
void dc_model_free(struct DcModel *model);

/**
 * Copies the model name, NUL-terminated, into `buf`. `*needed` receives the
 * required size including the terminator.
 *
 * # Safety
 * `buf` must hold `capacity` bytes (it may be null when `capacity` is 0).
 */
enum DcStatus dc_model_name(const struct DcModel *model,
                            char *buf,
                            size_t capacity,
                            size_t *needed);

/**
 * Limit constants of the model.
 *
 * # Safety
 * `model` must be a live handle and `out` a valid pointer.
 */
enum DcStatus dc_theory(const struct DcModel *model, struct DcTheory *out);

/**
 * Exact law of the raw statistic at step `n`: support points in `raw_out`,
 * masses in `prob_out`, both of length `*len_out`. Zero-mass points are
 * skipped. If `capacity` is too small, `*len_out` receives the required
 * length and `DC_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `raw_out` and `prob_out` must hold `capacity` elements; `len_out` must be valid.
 */
enum DcStatus dc_exact_pmf(const struct DcModel *model,
                           uint64_t n,
                           uint64_t budget,
                           int64_t *raw_out,
                           double *prob_out,
                           size_t capacity,
                           size_t *len_out);

/**
 * `reps` simulated final raw values written to `out`. Replicate `i` depends
 * only on `(seed, i)`.
 *
 * # Safety
 * `out` must hold `reps` elements.
 */
enum DcStatus dc_replicate_final(const struct DcModel *model,
                                 uint64_t n,
                                 size_t reps,
                                 uint64_t seed,
                                 int64_t *out);

/**
 * Runs the Monte Carlo moment check with default tolerances. Returns
 * `DC_STATUS_OK` or `DC_STATUS_VERIFICATION_FAILED`; `*report_json`, if not
 * null, receives the full report, to be released with [`dc_string_free`].
 *
 * # Safety
 * `report_json` must be null or a valid pointer.
 */
enum DcStatus dc_verify(const struct DcModel *model,
                        uint64_t n,
                        size_t reps,
                        uint64_t seed,
                        uint32_t k_max,
                        char **report_json);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void dc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DRIFTCLT_H */
