#ifndef HOSLAB_H
#define HOSLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum HoslabStatus {
  HOSLAB_STATUS_OK = 0,
  HOSLAB_STATUS_NULL_POINTER = 1,
  HOSLAB_STATUS_INVALID_ARGUMENT = 2,
  HOSLAB_STATUS_LENGTH_MISMATCH = 3,
  HOSLAB_STATUS_GRID_MISMATCH = 4,
  HOSLAB_STATUS_BLOW_UP = 5,
  HOSLAB_STATUS_NUMERICAL = 6,
  HOSLAB_STATUS_PANIC = 7,
} HoslabStatus;

/**
 * Complex field sampled on a grid.
 */
typedef struct HoslabField HoslabField;

/**
 * Periodic grid `[−L, L)^d` with `n` points per axis and dispersion order `k`.
 */
typedef struct HoslabGrid HoslabGrid;

/**
 * Split-step solver settings.
 */
typedef struct HoslabSolver HoslabSolver;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL, or
 * 0 when no error has been recorded.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t hoslab_last_error(char *buf, size_t len);

/**
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum HoslabStatus hoslab_grid_new(size_t d,
                                  uint32_t k,
                                  double half_period,
                                  size_t n,
                                  struct HoslabGrid **out);

/**
 * # Safety
 * `grid` must be null or a handle from [`hoslab_grid_new`] not yet freed.
 */
void hoslab_grid_free(struct HoslabGrid *grid);

/**
 * Number of grid points `n^d`, or 0 for a null handle.
 *
 * # Safety
 * `grid` must be null or a live grid handle.
 */
size_t hoslab_grid_len(const struct HoslabGrid *grid);

/**
 * Largest resolved frequency `πn/(2L)`, or NaN for a null handle.
 *
 * # Safety
 * `grid` must be null or a live grid handle.
 */
double hoslab_grid_nyquist(const struct HoslabGrid *grid);

/**
 * Builds a field from row-major real and imaginary parts of length `len`.
 *
 * # Safety
 * `re` and `im` must be valid for `len` reads; `out` for one pointer write.
 */
enum HoslabStatus hoslab_field_new(const struct HoslabGrid *grid,
                                   const double *re,
                                   const double *im,
                                   size_t len,
                                   struct HoslabField **out);

/**
 * # Safety
 * `field` must be null or a handle not yet freed.
 */
void hoslab_field_free(struct HoslabField *field);

/**
 * Copies the samples into `re` and `im`, which must hold exactly the grid length.
 *
 * # Safety
 * `re` and `im` must be valid for `len` writes.
 */
enum HoslabStatus hoslab_field_values(const struct HoslabField *field,
                                      double *re,
                                      double *im,
                                      size_t len);

/**
 * `‖f‖_{L^p}`; pass `INFINITY` for the supremum norm.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for one write.
 */
enum HoslabStatus hoslab_field_lp_norm(const struct HoslabField *field, double p, double *out);

/**
 * `‖f‖_{H^γ}`, or `‖f‖_{Ḣ^γ}` when `homogeneous` is true.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for one write.
 */
enum HoslabStatus hoslab_field_sobolev_norm(const struct HoslabField *field,
                                            double gamma,
                                            bool homogeneous,
                                            double *out);

/**
 * Conserved energy `½‖u‖²_{Ḣ^{k/2}} + ¼‖u‖⁴_{L⁴}`.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for one write.
 */
enum HoslabStatus hoslab_field_energy(const struct HoslabField *field, double *out);

/**
 * Modified energy `E(I_N u)` with I-operator order `gamma`.
 *
 * # Safety
 * `field` must be a live handle and `out` valid for one write.
 */
enum HoslabStatus hoslab_field_modified_energy(const struct HoslabField *field,
                                               double n,
                                               double gamma,
                                               double *out);

/**
 * Solver with step `dt`, final time `horizon`, dealiasing on.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum HoslabStatus hoslab_solver_new(double dt, double horizon, struct HoslabSolver **out);

/**
 * # Safety
 * `solver` must be null or a handle not yet freed.
 */
void hoslab_solver_free(struct HoslabSolver *solver);

/**
 * Toggles dealiasing, the nonlinear term and the dispersive term.
 *
 * # Safety
 * `solver` must be a live handle.
 */
enum HoslabStatus hoslab_solver_configure(struct HoslabSolver *solver,
                                          bool dealias,
                                          bool nonlinearity,
                                          bool dispersion);

/**
 * Evolves `field` to the solver horizon and returns a new field handle.
 *
 * # Safety
 * `solver` and `field` must be live handles; `out` valid for one pointer write.
 */
enum HoslabStatus hoslab_evolve(const struct HoslabSolver *solver,
                                const struct HoslabField *field,
                                struct HoslabField **out);

/**
 * Exact threshold exponents for dispersion order `k ≥ 3`, as numerator and
 * denominator pairs in the order `γ(k)`, `γ₀(k)`, `α(k)`.
 *
 * # Safety
 * `out` must be valid for six writes.
 */
enum HoslabStatus hoslab_thresholds(uint32_t k, int64_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HOSLAB_H */
