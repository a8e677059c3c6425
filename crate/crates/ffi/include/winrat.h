#ifndef WINRAT_H
#define WINRAT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define WINRAT_OK 0

#define WINRAT_ERR_NULL -1

#define WINRAT_ERR_IO -2

#define WINRAT_ERR_PARSE -3

#define WINRAT_ERR_INTEGRITY -4

#define WINRAT_ERR_INVALID_ARG -5

#define WINRAT_ERR_PANIC -6

#define WINRAT_ERR_INTERNAL -7

#define WINRAT_VERIFIED 1

#define WINRAT_NOT_VERIFIED 0

/**
 * Stands for an unbounded limit in `WinratConfig`.
 */
#define WINRAT_INFINITE UINT64_MAX

/**
 * Opaque checker handle.
 */
typedef struct WinratChecker WinratChecker;

typedef struct WinratConfig {
  uint64_t theta;
  uint64_t mu;
  uint64_t span;
  uint64_t tail;
  uint64_t add_max;
  uint64_t prune_cap;
  uint64_t mem_budget;
  bool unit_probe;
  bool subset;
  bool window;
  bool deactivate;
  bool prune;
  bool fast_path;
  bool debug_theorem2;
} WinratConfig;

typedef struct WinratStats {
  uint64_t inferences;
  uint64_t deletions;
  uint64_t rup_checks;
  uint64_t rat_checks;
  uint64_t occurrence_builds;
  uint64_t fastpath_blocks;
  uint64_t window_misses;
  uint64_t probe_promotions;
  uint64_t subset_promotions;
  uint64_t used;
  uint64_t propagations;
  uint64_t evictions;
  uint64_t reloads;
  uint64_t theorem2_violations;
} WinratStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Fills `out` with the default configuration.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `WinratConfig`.
 */
int32_t winrat_config_default(struct WinratConfig *out);

/**
 * Loads a DIMACS formula and a DRAT proof from files. `cfg` may be null
 * for the defaults. On success `*out` owns a new handle.
 *
 * # Safety
 * Paths must be null or NUL-terminated strings; `cfg` must be null or
 * valid; `out` must be null or writable.
 */
int32_t winrat_checker_from_files(const char *cnf_path,
                                  const char *proof_path,
                                  const struct WinratConfig *cfg,
                                  struct WinratChecker **out);

/**
 * Like `winrat_checker_from_files` with both inputs in memory. The
 * buffers are copied.
 *
 * # Safety
 * Each buffer must be null with length 0 or valid for its length.
 */
int32_t winrat_checker_from_buffers(const uint8_t *cnf,
                                    size_t cnf_len,
                                    const uint8_t *proof,
                                    size_t proof_len,
                                    const struct WinratConfig *cfg,
                                    struct WinratChecker **out);

/**
 * Runs the check and stores `WINRAT_VERIFIED` or `WINRAT_NOT_VERIFIED` in
 * `*verdict`. Later calls return the first result.
 *
 * # Safety
 * `checker` must be null or a live handle; `verdict` null or writable.
 */
int32_t winrat_verify(struct WinratChecker *checker, int32_t *verdict);

/**
 * Stores the 0-based index of the first inference that failed every
 * check, or -1 if there is none (or the check has not run).
 *
 * # Safety
 * `checker` must be null or a live handle; `out` null or writable.
 */
int32_t winrat_failing_index(const struct WinratChecker *checker, int64_t *out);

/**
 * Copies the counters of the last run.
 *
 * # Safety
 * `checker` must be null or a live handle; `out` null or writable.
 */
int32_t winrat_stats(const struct WinratChecker *checker, struct WinratStats *out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `checker` must be null or a handle not freed before.
 */
void winrat_checker_free(struct WinratChecker *checker);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *winrat_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *winrat_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WINRAT_H */
