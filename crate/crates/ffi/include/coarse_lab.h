#ifndef COARSE_LAB_H
#define COARSE_LAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every fallible function.
 */
typedef enum {
  COARSE_LAB_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  COARSE_LAB_STATUS_NULL_POINTER = 1,
  /**
   * Input data failed validation (bad metric, bad JSON, bad indices).
   */
  COARSE_LAB_STATUS_INVALID_INPUT = 2,
  /**
   * No pair of points is at distance at least `R`.
   */
  COARSE_LAB_STATUS_NO_FAR_PAIRS = 3,
  /**
   * The instance exceeds a size limit of the solver.
   */
  COARSE_LAB_STATUS_TOO_LARGE = 4,
  /**
   * A result was produced, but the solver stopped short of its tolerance.
   */
  COARSE_LAB_STATUS_MARGINAL = 5,
  /**
   * The graph is disconnected.
   */
  COARSE_LAB_STATUS_DISCONNECTED = 6,
  /**
   * A caller-provided buffer has the wrong length.
   */
  COARSE_LAB_STATUS_BUFFER_SIZE = 7,
  /**
   * Internal failure; see the last error message.
   */
  COARSE_LAB_STATUS_INTERNAL = 8,
} CoarseLabStatus;

/**
 * Opaque result of a separation solve.
 */
typedef struct CoarseLabEmbedResult CoarseLabEmbedResult;

/**
 * Opaque finite simple graph.
 */
typedef struct CoarseLabGraph CoarseLabGraph;

/**
 * Opaque finite metric space.
 */
typedef struct CoarseLabSpace CoarseLabSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *coarse_lab_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *coarse_lab_version(void);

/**
 * Builds a space from a row-major `n × n` distance matrix.
 *
 * # Safety
 * `dist` must point to `n * n` readable doubles and `out` must be writable.
 */
CoarseLabStatus coarse_lab_space_from_matrix(const double *dist, size_t n, CoarseLabSpace **out);

/**
 * Builds a space from JSON `{"labels": [...], "dist": [[...]]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 */
CoarseLabStatus coarse_lab_space_from_json(const char *json, CoarseLabSpace **out);

/**
 * # Safety
 * `space` must be null or a handle from this library, not yet freed.
 */
void coarse_lab_space_free(CoarseLabSpace *space);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t coarse_lab_space_len(const CoarseLabSpace *space);

/**
 * Optimal Hilbert separation at scale `r`. On `Ok` or `Marginal`, `*out`
 * receives a result handle.
 *
 * # Safety
 * `space` must be a live handle and `out` writable.
 */
CoarseLabStatus coarse_lab_embed_hilbert(const CoarseLabSpace *space,
                                         double r,
                                         CoarseLabEmbedResult **out);

/**
 * Optimal ℓ¹ separation at scale `r` (at most 10 points).
 *
 * # Safety
 * `space` must be a live handle and `out` writable.
 */
CoarseLabStatus coarse_lab_embed_l1(const CoarseLabSpace *space,
                                    double r,
                                    CoarseLabEmbedResult **out);

/**
 * # Safety
 * `result` must be null or a live handle.
 */
void coarse_lab_result_free(CoarseLabEmbedResult *result);

/**
 * Optimal separation, or NaN for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
double coarse_lab_result_s_star(const CoarseLabEmbedResult *result);

/**
 * Certified Poincaré constant, or NaN for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
double coarse_lab_result_certificate_c(const CoarseLabEmbedResult *result);

/**
 * Number of ordered pairs in the certificate support.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
size_t coarse_lab_result_certificate_len(const CoarseLabEmbedResult *result);

/**
 * Copies the certificate into three parallel arrays of length `len`, which
 * must equal [`coarse_lab_result_certificate_len`].
 *
 * # Safety
 * Each array must have room for `len` elements.
 */
CoarseLabStatus coarse_lab_result_certificate(const CoarseLabEmbedResult *result,
                                              size_t *first,
                                              size_t *second,
                                              double *weight,
                                              size_t len);

/**
 * Copies the row-major Gram matrix into `buf` (`len` must be `n * n`).
 * Fails with `InvalidInput` for ℓ¹ results, which carry cuts instead.
 *
 * # Safety
 * `buf` must have room for `len` doubles.
 */
CoarseLabStatus coarse_lab_result_gram(const CoarseLabEmbedResult *result, double *buf, size_t len);

/**
 * The result as JSON. Release the string with [`coarse_lab_string_free`].
 *
 * # Safety
 * `result` must be null or a live handle.
 */
char *coarse_lab_result_to_json(const CoarseLabEmbedResult *result);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void coarse_lab_string_free(char *s);

/**
 * `sup Σ w·‖f(x) − f(y)‖²` over 1-Lipschitz maps into Hilbert space, for
 * weights `w[k]` on the ordered pairs `(first[k], second[k])`.
 *
 * # Safety
 * The three arrays must hold `len` elements; `out` must be writable.
 */
CoarseLabStatus coarse_lab_poincare_value(const CoarseLabSpace *space,
                                          const size_t *first,
                                          const size_t *second,
                                          const double *weight,
                                          size_t len,
                                          double *out);

/**
 * Builds a graph on `n` vertices from `m` edges stored as `2m` endpoints.
 *
 * # Safety
 * `edges` must hold `2 * m` elements (it may be null when `m = 0`); `out`
 * must be writable.
 */
CoarseLabStatus coarse_lab_graph_from_edges(size_t n,
                                            const size_t *edges,
                                            size_t m,
                                            CoarseLabGraph **out);

/**
 * # Safety
 * `graph` must be null or a live handle.
 */
void coarse_lab_graph_free(CoarseLabGraph *graph);

/**
 * Second-smallest Laplacian eigenvalue.
 *
 * # Safety
 * `graph` must be a live handle and `out` writable.
 */
CoarseLabStatus coarse_lab_graph_lambda1(const CoarseLabGraph *graph, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COARSE_LAB_H */
