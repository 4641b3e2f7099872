#ifndef SPREADLAB_H
#define SPREADLAB_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SlStatus {
  SL_STATUS_OK = 0,
  SL_STATUS_NULL_POINTER = 1,
  SL_STATUS_INVALID_ARGUMENT = 2,
  SL_STATUS_VALIDATION = 3,
  SL_STATUS_ESTIMATION = 4,
  SL_STATUS_UNSUPPORTED = 5,
  SL_STATUS_STATE = 6,
  SL_STATUS_IO = 7,
  SL_STATUS_PARSE = 8,
  SL_STATUS_BUFFER_TOO_SMALL = 9,
  SL_STATUS_PANIC = 10,
} SlStatus;

typedef enum SlPenaltyBase {
  SL_PENALTY_BASE_WEIGHT = 0,
  SL_PENALTY_BASE_DEGREE = 1,
} SlPenaltyBase;

typedef enum SlPhase {
  SL_PHASE_EXPLOSIVE = 0,
  SL_PHASE_QUASI_EXPONENTIAL = 1,
  SL_PHASE_POLYNOMIAL = 2,
  SL_PHASE_GEOMETRIC = 3,
} SlPhase;

/**
 * Opaque spatial graph.
 */
typedef struct SlGraph SlGraph;

/**
 * Opaque result of one spreading run.
 */
typedef struct SlSpread SlSpread;

typedef struct SlGirgParams {
  /**
   * Expected node count.
   */
  double n;
  size_t d;
  double tau;
  /**
   * `INFINITY` selects the threshold kernel.
   */
  double alpha;
  double c;
  uint64_t seed;
} SlGirgParams;

typedef struct SlPenalty {
  double mu;
  double nu;
  double zeta;
  double beta;
  enum SlPenaltyBase base;
} SlPenalty;

typedef struct SlModelPoint {
  size_t d;
  double tau;
  double alpha;
  double mu;
  double zeta;
} SlModelPoint;

/**
 * Growth class; absent exponents are NaN.
 */
typedef struct SlPhaseReport {
  enum SlPhase phase;
  /**
   * `'A'` to `'G'`.
   */
  char region;
  double phi;
  double delta;
  double psi;
  double eta_star;
  double s_star;
  bool boundary;
  bool upper_bound_only;
} SlPhaseReport;

typedef struct SlHillEstimate {
  size_t kappa;
  double gamma_hat;
  double tau_hat;
} SlHillEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a NUL-terminated string with static lifetime.
 */
const char *sl_version(void);

/**
 * Copy the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `cap - 1` bytes). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be NULL or point to `cap` writable bytes.
 */
size_t sl_last_error(char *buf, size_t cap);

/**
 * Sample a GIRG into a new graph handle.
 *
 * # Safety
 * `params` must be valid for reads and `out` valid for writes.
 */
enum SlStatus sl_girg_sample(const struct SlGirgParams *params, struct SlGraph **out);

/**
 * Load a graph from an sgraph file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` valid for writes.
 */
enum SlStatus sl_graph_read(const char *path, struct SlGraph **out);

/**
 * # Safety
 * `graph` must be a live handle and `path` a NUL-terminated string.
 */
enum SlStatus sl_graph_write(const struct SlGraph *graph, const char *path);

/**
 * Release a graph. NULL is ignored.
 *
 * # Safety
 * `graph` must be NULL or a handle not yet freed.
 */
void sl_graph_free(struct SlGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle; the outputs valid for writes.
 */
enum SlStatus sl_graph_size(const struct SlGraph *graph, size_t *nodes, size_t *edges);

/**
 * Degree of every node.
 *
 * # Safety
 * `buf` must hold `cap` values; `written` may be NULL.
 */
enum SlStatus sl_graph_degrees(const struct SlGraph *graph,
                               size_t *buf,
                               size_t cap,
                               size_t *written);

/**
 * Degree-preserving switch-chain randomization into a new handle.
 *
 * # Safety
 * `graph` must be a live handle and `out` valid for writes.
 */
enum SlStatus sl_graph_rewire(const struct SlGraph *graph,
                              size_t sweeps,
                              uint64_t seed,
                              struct SlGraph **out);

/**
 * One spreading run from `source` with costs drawn from `seed`.
 *
 * # Safety
 * `graph` must be a live handle, `penalty` readable and `out` writable.
 */
enum SlStatus sl_spread_run(const struct SlGraph *graph,
                            const struct SlPenalty *penalty,
                            size_t source,
                            uint64_t seed,
                            struct SlSpread **out);

/**
 * Release a spreading result. NULL is ignored.
 *
 * # Safety
 * `spread` must be NULL or a handle not yet freed.
 */
void sl_spread_free(struct SlSpread *spread);

/**
 * Infection time of every node, `INFINITY` when never reached.
 *
 * # Safety
 * `buf` must hold `cap` values; `written` may be NULL.
 */
enum SlStatus sl_spread_times(const struct SlSpread *spread,
                              double *buf,
                              size_t cap,
                              size_t *written);

/**
 * Reached nodes in infection order.
 *
 * # Safety
 * `buf` must hold `cap` values; `written` may be NULL.
 */
enum SlStatus sl_spread_order(const struct SlSpread *spread,
                              uint32_t *buf,
                              size_t cap,
                              size_t *written);

/**
 * Epidemic curve samples: `counts[k]` infections by `times[k]`.
 *
 * # Safety
 * Both buffers must hold `cap` values; `written` may be NULL.
 */
enum SlStatus sl_spread_curve(const struct SlSpread *spread,
                              size_t *counts,
                              double *times,
                              size_t cap,
                              size_t *written);

/**
 * # Safety
 * `point` readable, `out` writable.
 */
enum SlStatus sl_classify(const struct SlModelPoint *point, double tol, struct SlPhaseReport *out);

/**
 * Hill estimate with plateau-selected `kappa`.
 *
 * # Safety
 * `values` must hold `len` readable values; `out` writable.
 */
enum SlStatus sl_hill_select(const double *values, size_t len, struct SlHillEstimate *out);

/**
 * Predicted edges per node (counted from both ends) with length in `[l1, l2]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum SlStatus sl_edge_tail(size_t d,
                           double tau,
                           double alpha,
                           double c,
                           double l1,
                           double l2,
                           double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPREADLAB_H */
