#ifndef METAVERIFY_H
#define METAVERIFY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MvStatus {
  MV_STATUS_OK = 0,
  /**
   * A required pointer was null.
   */
  MV_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MV_STATUS_INVALID_UTF8 = 2,
  /**
   * A parameter was outside its domain.
   */
  MV_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Input data could not be read or was inconsistent.
   */
  MV_STATUS_DATA = 4,
  /**
   * The lookup found no entry.
   */
  MV_STATUS_NOT_FOUND = 5,
  /**
   * The output buffer is too small; the required size was written.
   */
  MV_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  MV_STATUS_PANIC = 7,
} MvStatus;

typedef enum MvSidedness {
  MV_SIDEDNESS_TWO_SIDED = 0,
  MV_SIDEDNESS_GREATER = 1,
  MV_SIDEDNESS_LESS = 2,
} MvSidedness;

typedef enum MvPermutationMode {
  MV_PERMUTATION_MODE_AUTO = 0,
  MV_PERMUTATION_MODE_EXHAUSTIVE = 1,
  MV_PERMUTATION_MODE_MONTE_CARLO = 2,
} MvPermutationMode;

typedef enum MvPairClass {
  MV_PAIR_CLASS_METAPHORICAL = 0,
  MV_PAIR_CLASS_LITERAL = 1,
  MV_PAIR_CLASS_AMBIGUOUS = 2,
} MvPairClass;

typedef enum MvNormKind {
  MV_NORM_KIND_CONCRETENESS = 0,
  MV_NORM_KIND_IMAGEABILITY = 1,
  /**
   * Word complexity ratings, stored as familiarity `6 - c`.
   */
  MV_NORM_KIND_COMPLEXITY = 2,
} MvNormKind;

typedef enum MvUpos {
  MV_UPOS_VERB = 0,
  MV_UPOS_NOUN = 1,
  MV_UPOS_PRON = 2,
  MV_UPOS_ADJ = 3,
  MV_UPOS_ADV = 4,
  MV_UPOS_OTHER = 5,
} MvUpos;

/**
 * Opaque norm table.
 */
typedef struct MvNormTable MvNormTable;

typedef struct MvTestResult {
  double statistic;
  double p_value;
  /**
   * Zero when the p-value is exact.
   */
  uint64_t replicates;
} MvTestResult;

typedef struct MvInterval {
  double low;
  double high;
} MvInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *mv_last_error(void);

/**
 * Exact binomial test of `k` successes in `n` trials against `p0`.
 *
 * # Safety
 * `out` must point to writable memory for one `MvTestResult`.
 */
enum MvStatus mv_binomial_test(uint64_t k,
                               uint64_t n,
                               double p0,
                               enum MvSidedness sidedness,
                               struct MvTestResult *out);

/**
 * Permutation test for `ka/na - kb/nb` from counts of ones per group.
 *
 * # Safety
 * `out` must point to writable memory for one `MvTestResult`.
 */
enum MvStatus mv_permutation_test(uint64_t ka,
                                  uint64_t na,
                                  uint64_t kb,
                                  uint64_t nb,
                                  uint64_t replicates,
                                  uint64_t seed,
                                  enum MvSidedness sidedness,
                                  enum MvPermutationMode mode,
                                  struct MvTestResult *out);

/**
 * Percentile bootstrap interval for the mean of `values`.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` to one `MvInterval`.
 */
enum MvStatus mv_bootstrap_ci(const double *values,
                              size_t len,
                              double level,
                              uint64_t replicates,
                              uint64_t seed,
                              struct MvInterval *out);

/**
 * Bonferroni correction of `len` p-values. Writes adjusted p-values to
 * `adjusted` and 0/1 rejection flags to `reject`; either may be null.
 *
 * # Safety
 * `p_values` must hold `len` doubles; non-null outputs must hold `len` slots.
 */
enum MvStatus mv_bonferroni(const double *p_values,
                            size_t len,
                            double alpha,
                            double *adjusted,
                            uint8_t *reject);

/**
 * Familiarity `6 - c` for a complexity rating in `[1, 6]`.
 *
 * # Safety
 * `out` must point to one writable double.
 */
enum MvStatus mv_familiarity_from_complexity(double complexity, double *out);

/**
 * Classifies a pair with `metaphorical` of `total` occurrences annotated
 * metaphorical against the `hi`/`lo` rate thresholds.
 *
 * # Safety
 * `out` must point to one writable `MvPairClass`.
 */
enum MvStatus mv_classify_pair(uint64_t total,
                               uint64_t metaphorical,
                               double hi,
                               double lo,
                               enum MvPairClass *out);

/**
 * Loads a norm file. On success `*out` owns a table to be released with
 * [`mv_norm_table_free`].
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` one writable pointer slot.
 */
enum MvStatus mv_norm_table_load(const char *path, enum MvNormKind kind, struct MvNormTable **out);

/**
 * Score for `lemma`, or `MV_STATUS_NOT_FOUND`.
 *
 * # Safety
 * `table` must come from [`mv_norm_table_load`] and not be freed.
 */
enum MvStatus mv_norm_table_lookup(const struct MvNormTable *table, const char *lemma, double *out);

/**
 * Number of entries, or 0 for a null table.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t mv_norm_table_len(const struct MvNormTable *table);

/**
 * Releases a table. Null is ignored.
 *
 * # Safety
 * `table` must be null or a handle not yet freed.
 */
void mv_norm_table_free(struct MvNormTable *table);

/**
 * Lemmatizes `surface` into `buf` as a NUL-terminated string. When `cap` is
 * too small nothing is written except the required size (terminator
 * included) to `needed`, which may be null.
 *
 * # Safety
 * `surface` must be NUL-terminated; `buf` must have `cap` writable bytes.
 */
enum MvStatus mv_lemmatize(const char *surface,
                           enum MvUpos upos,
                           char *buf,
                           size_t cap,
                           size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METAVERIFY_H */
