#ifndef INCIDENCE_H
#define INCIDENCE_H

/* Generated by cbindgen from incidence-capi. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a library call. Every value except `Ok` is accompanied by a
 * message retrievable with [`inc_last_error`] on the same thread.
 */
typedef enum IncStatus {
  INC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  INC_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  INC_STATUS_UTF8 = 2,
  /**
   * The input could not be parsed: JSON document, element expression,
   * or family name.
   */
  INC_STATUS_PARSE = 3,
  /**
   * The request was well-formed but the engine rejected it (threshold
   * below two, zero trials, set index out of range, ...).
   */
  INC_STATUS_DOMAIN = 4,
} IncStatus;

/**
 * A parsed configuration: tower, points, lines, curves, and sets behind
 * one shared coefficient field. Immutable once built.
 */
typedef struct IncConfig IncConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string. Never freed.
 */
const char *inc_version(void);

/**
 * Message from the most recent failing call on this thread, or null if
 * none has failed yet. The pointer stays valid until the next failing
 * call on the same thread; do not free it.
 */
const char *inc_last_error(void);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library that has not
 * been freed already.
 */
void inc_string_free(char *s);

/**
 * Parses a JSON configuration document into a new handle.
 *
 * On success writes the handle to `out`; release it with
 * [`inc_config_free`]. On failure `out` is untouched.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum IncStatus inc_config_parse(const char *json, struct IncConfig **out);

/**
 * Builds a named extremal family over the rationals.
 *
 * `family` accepts the same names as the CLI (`st_grid`, `point_heavy`,
 * `line_heavy`, `square_grid`, `arithmetic_progression`,
 * `geometric_progression`). `ratio` is an optional element expression
 * for the geometric ratio; pass null for families that take none.
 *
 * # Safety
 * `family` must be a NUL-terminated string, `ratio` null or the same,
 * and `out` valid for writes.
 */
enum IncStatus inc_config_generate(const char *family,
                                   uint32_t n,
                                   const char *ratio,
                                   struct IncConfig **out);

/**
 * Serializes a handle back to its JSON document form.
 *
 * # Safety
 * `cfg` must be a live handle; `out_json` must be valid for writes.
 */
enum IncStatus inc_config_render(const struct IncConfig *cfg, char **out_json);

/**
 * Releases a handle. Null is a no-op.
 *
 * # Safety
 * `cfg` must be null or a live handle that has not been freed already.
 */
void inc_config_free(struct IncConfig *cfg);

/**
 * Number of points in the configuration; zero if `cfg` is null.
 *
 * # Safety
 * `cfg` must be null or a live handle.
 */
uint64_t inc_config_num_points(const struct IncConfig *cfg);

/**
 * Number of lines in the configuration; zero if `cfg` is null.
 *
 * # Safety
 * `cfg` must be null or a live handle.
 */
uint64_t inc_config_num_lines(const struct IncConfig *cfg);

/**
 * Number of curves in the document; zero if `cfg` is null.
 *
 * # Safety
 * `cfg` must be null or a live handle.
 */
uint64_t inc_config_num_curves(const struct IncConfig *cfg);

/**
 * Number of element sets in the document; zero if `cfg` is null.
 *
 * # Safety
 * `cfg` must be null or a live handle.
 */
uint64_t inc_config_num_sets(const struct IncConfig *cfg);

/**
 * Exact point-line incidence count. `threads` of zero lets the library
 * choose; any other value is used as given. The count is exact and
 * identical for every thread count.
 *
 * # Safety
 * `cfg` must be a live handle; `out_incidences` must be valid for writes.
 */
enum IncStatus inc_count(const struct IncConfig *cfg, uint32_t threads, uint64_t *out_incidences);

/**
 * Counting report as JSON: sizes, the exact count, and the bound ratios
 * evaluated in floating point.
 *
 * # Safety
 * `cfg` must be a live handle; `out_json` must be valid for writes.
 */
enum IncStatus inc_count_report(const struct IncConfig *cfg, uint32_t threads, char **out_json);

/**
 * Lines of the configuration meeting at least `threshold` of its points,
 * as JSON. `threshold` must be at least two.
 *
 * # Safety
 * `cfg` must be a live handle; `out_json` must be valid for writes.
 */
enum IncStatus inc_rich_report(const struct IncConfig *cfg, uint64_t threshold, char **out_json);

/**
 * Connecting-line summary for the configuration's points, as JSON.
 *
 * # Safety
 * `cfg` must be a live handle; `out_json` must be valid for writes.
 */
enum IncStatus inc_beck_report(const struct IncConfig *cfg, char **out_json);

/**
 * Sum-set and product-set sizes for the document's `set_index`-th element
 * set, as JSON. The set needs at least two elements.
 *
 * # Safety
 * `cfg` must be a live handle; `out_json` must be valid for writes.
 */
enum IncStatus inc_sum_product_report(const struct IncConfig *cfg,
                                      size_t set_index,
                                      char **out_json);

/**
 * Runs `trials` random rational specializations of the configuration and
 * reports, as JSON, whether every one preserved the whole incidence
 * matrix. Requires a purely transcendental tower and at least one trial.
 *
 * # Safety
 * `cfg` must be a live handle; `out_json` must be valid for writes.
 */
enum IncStatus inc_invariance_report(const struct IncConfig *cfg,
                                     uint32_t trials,
                                     uint64_t seed,
                                     char **out_json);

/**
 * Degrees-of-freedom audit of the document's curves against its points,
 * as JSON. When the document declares no curves, its lines stand in as
 * degree-one curves. `k` and `s` must be positive.
 *
 * # Safety
 * `cfg` must be a live handle; `out_json` must be valid for writes.
 */
enum IncStatus inc_dof_report(const struct IncConfig *cfg,
                              uint32_t k,
                              uint32_t s,
                              double eps,
                              char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INCIDENCE_H */
