#ifndef CATENOID_LAB_H
#define CATENOID_LAB_H

/* Generated by cbindgen from crates/catenoid-lab-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Parity selector for [`cl_eigenvalues`]: 0 even, 1 odd.
 */
#define CL_PARITY_EVEN 0

#define CL_PARITY_ODD 1

/**
 * Result code of every call.
 */
typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_NULL_POINTER = 1,
  /**
   * `a <= 1/2` or not finite.
   */
  CL_STATUS_DOMAIN = 2,
  CL_STATUS_INVALID_INPUT = 3,
  /**
   * A solver, quadrature or root finder failed.
   */
  CL_STATUS_NUMERICAL = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  CL_STATUS_PANIC = 5,
} ClStatus;

/**
 * Opaque solved geometry.
 */
typedef struct ClGeometry ClGeometry;

/**
 * Scalar summary of a [`ClGeometry`].
 */
typedef struct ClGeometryView {
  double a;
  double s0;
  double phi_s0;
  double r;
  double b_s0;
  double coth_r;
  double h;
  double y;
  double g_margin;
  double g_margin_alt;
} ClGeometryView;

typedef struct ClConditions {
  double a;
  double h;
  double h_prime;
  double y;
  double g_margin;
  double g_margin_alt;
  double e_value;
  double fprime_value;
  double phi_s0;
  double mode0_min_abs_mu;
  bool phi_positive;
  bool consistent;
  bool hardy_cond1;
  bool hardy_cond2;
} ClConditions;

typedef struct ClIndexNullity {
  uint32_t ind_total;
  uint32_t nul_total;
  /**
   * Upper end of the nullity range; equals `nul_total` without flags.
   */
  uint32_t nul_upper;
  uint32_t truncation_k;
  double truncation_margin;
  bool counts_agree;
} ClIndexNullity;

typedef struct ClConstants {
  double sigma_star;
  double rho_star;
  double c_star;
  double s_val;
  double c0;
  double xi1;
  double i_star;
  double d_inf;
  double gamma_quarter;
} ClConstants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never null.
 */
const char *cl_status_message(enum ClStatus status);

/**
 * Detail of the last failure on this thread; empty after a success. The
 * pointer stays valid until the next call on the same thread.
 */
const char *cl_last_error(void);

/**
 * Solve the free-boundary problem at `a` and store a new handle in `*out`.
 *
 * # Safety
 * `out` must be null or valid for one pointer write.
 */
enum ClStatus cl_geometry_new(double a, struct ClGeometry **out);

/**
 * Release a handle from [`cl_geometry_new`]. Null is ignored.
 *
 * # Safety
 * `geometry` must be null or a live handle not freed before.
 */
void cl_geometry_free(struct ClGeometry *geometry);

/**
 * Copy the scalar fields of a handle.
 *
 * # Safety
 * `geometry` must be a live handle; `out` valid for one write.
 */
enum ClStatus cl_geometry_view(const struct ClGeometry *geometry, struct ClGeometryView *out);

/**
 * Write the first `len` eigenvalues (`len <= 9`) of sector `(k, parity)`.
 *
 * # Safety
 * `geometry` must be a live handle; `out` valid for `len` writes.
 */
enum ClStatus cl_eigenvalues(const struct ClGeometry *geometry,
                             uint32_t k,
                             uint32_t parity,
                             double *out,
                             size_t len);

/**
 * Evaluate the named conditions at `a`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum ClStatus cl_conditions(double a, struct ClConditions *out);

/**
 * Index and nullity at `a`, computing modes `0..=max(k_max, 2)`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum ClStatus cl_index_nullity(double a, uint32_t k_max, struct ClIndexNullity *out);

/**
 * Closed-form asymptotic constants.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum ClStatus cl_constants(struct ClConstants *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATENOID_LAB_H */
