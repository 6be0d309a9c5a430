#ifndef GRAPHCODE_H
#define GRAPHCODE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum GcStatus {
  GC_STATUS_OK = 0,
  GC_STATUS_NULL_POINTER = 1,
  GC_STATUS_INVALID_ARGUMENT = 2,
  GC_STATUS_NUMERIC_FAILURE = 3,
  GC_STATUS_SIZE_LIMIT = 4,
  GC_STATUS_PANIC = 5,
} GcStatus;

/**
 * A graph or hypergraph code built over a local code.
 */
typedef struct GcGraphCode GcGraphCode;

/**
 * A local code. Safe to share between threads.
 */
typedef struct GcLocalCode GcLocalCode;

/**
 * Parameters of a local code.
 */
typedef struct GcLocalParams {
  size_t n;
  size_t k;
  size_t d0;
  size_t t_max;
} GcLocalParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gc_version(void);

/**
 * Message of the last failing call on this thread, or null if there was none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *gc_last_error(void);

/**
 * Builds a local code from a spec such as `hamming:3`, `golay23`, `bch31`,
 * `spc:8`, `repetition:5` or `file:PATH`.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` valid for writes.
 */
enum GcStatus gc_local_code_new(const char *spec, struct GcLocalCode **out);

/**
 * Releases a local code. Graph codes built from it stay valid.
 *
 * # Safety
 * `code` must be null or a handle from [`gc_local_code_new`] not yet freed.
 */
void gc_local_code_free(struct GcLocalCode *code);

/**
 * Writes `n`, `k`, `d0` and the correction radius.
 *
 * # Safety
 * `code` must be a live handle and `out` valid for writes.
 */
enum GcStatus gc_local_code_params(const struct GcLocalCode *code, struct GcLocalParams *out);

/**
 * Bounded-distance decoding of one local word of length `n` into `out`.
 *
 * # Safety
 * `input` and `out` must each point to `n` bytes; they may alias.
 */
enum GcStatus gc_local_code_decode(const struct GcLocalCode *code,
                                   size_t t,
                                   const uint8_t *input,
                                   uint8_t *out);

/**
 * Samples an `l`-partite code with `m` vertices per part from `seed`.
 *
 * # Safety
 * `local` must be a live handle and `out` valid for writes.
 */
enum GcStatus gc_graph_code_new(const struct GcLocalCode *local,
                                size_t l,
                                size_t m,
                                uint64_t seed,
                                struct GcGraphCode **out);

/**
 * # Safety
 * `code` must be null or a handle from [`gc_graph_code_new`] not yet freed.
 */
void gc_graph_code_free(struct GcGraphCode *code);

/**
 * Block length `N = n·m`, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t gc_graph_code_length(const struct GcGraphCode *code);

/**
 * Sets `*result` to 1 if the word satisfies every local constraint, else 0.
 *
 * # Safety
 * `word` must point to `gc_graph_code_length(code)` bytes and `result` be valid for
 * writes.
 */
enum GcStatus gc_graph_code_is_codeword(const struct GcGraphCode *code,
                                        const uint8_t *word,
                                        uint8_t *result);

/**
 * Decodes a received word: alternating decoding for `l = 2`, the branching list
 * decoder with `s` iterations otherwise. `max_iters = 0` selects the default cap.
 * `converged` and `iterations` may be null.
 *
 * # Safety
 * `input` and `out` must each point to `gc_graph_code_length(code)` bytes.
 */
enum GcStatus gc_graph_code_decode(const struct GcGraphCode *code,
                                   size_t t,
                                   size_t s,
                                   size_t max_iters,
                                   const uint8_t *input,
                                   uint8_t *out,
                                   uint8_t *converged,
                                   size_t *iterations);

/**
 * Error-fraction threshold `σ₀` of the bipartite ensemble with local length `n`
 * and radius `t`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GcStatus gc_sigma0_bipartite(size_t n, size_t t, double *out);

/**
 * Threshold `γ₀` of the `l`-partite ensemble.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GcStatus gc_gamma0_hypergraph(size_t n, size_t t, size_t d0, size_t l, double *out);

/**
 * Relative minimum distance guaranteed for almost every code in the ensemble.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GcStatus gc_delta_bound(size_t n, size_t d0, size_t l, double *out);

/**
 * Large-`n` relative distance for local relative distance `delta0`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GcStatus gc_delta_asymptotic(size_t l, double delta0, double *out);

/**
 * Large-`n` `γ₀` with the slack term set to zero.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum GcStatus gc_gamma0_asymptotic(size_t l, double delta0, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHCODE_H */
