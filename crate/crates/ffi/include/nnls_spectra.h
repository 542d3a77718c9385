#ifndef NNLS_SPECTRA_H
#define NNLS_SPECTRA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum NnlsCase {
  NNLS_CASE_I = 1,
  NNLS_CASE_II = 2,
} NnlsCase;

/**
 * Sector of a ray `ξ = x/(4t)`.
 */
typedef enum NnlsSector {
  NNLS_SECTOR_DECAY_LEFT = 0,
  NNLS_SECTOR_PLANE_WAVE_RIGHT = 1,
  NNLS_SECTOR_DECAY_MID = 2,
  NNLS_SECTOR_PERIODIC_MID = 3,
  NNLS_SECTOR_WINDING_PLANE_WAVE = 4,
  NNLS_SECTOR_WINDING_DECAY_LEFT = 5,
  NNLS_SECTOR_WINDING_DECAY_RIGHT = 6,
  NNLS_SECTOR_WINDING_INVERSE_PLANE_WAVE = 7,
  NNLS_SECTOR_WINDING_MIDDLE_DECAY = 8,
  NNLS_SECTOR_WINDING_MIDDLE_PERIODIC = 9,
} NnlsSector;

/**
 * Result of every fallible call.
 */
typedef enum NnlsStatus {
  NNLS_STATUS_OK = 0,
  NNLS_STATUS_NULL_POINTER = 1,
  NNLS_STATUS_INVALID_ARGUMENT = 2,
  NNLS_STATUS_OUT_OF_DOMAIN = 3,
  NNLS_STATUS_NON_GENERIC = 4,
  NNLS_STATUS_BOUNDARY_RAY = 5,
  NNLS_STATUS_NUMERICAL = 6,
  NNLS_STATUS_BLOW_UP = 7,
  NNLS_STATUS_INDEX_OUT_OF_RANGE = 8,
  NNLS_STATUS_BUFFER_TOO_SMALL = 9,
  NNLS_STATUS_NOT_AVAILABLE = 10,
  NNLS_STATUS_PANIC = 11,
} NnlsStatus;

/**
 * Snapshots of a finished simulation.
 */
typedef struct NnlsEvolution NnlsEvolution;

/**
 * Background step with its spectral functions and discrete-spectrum report.
 */
typedef struct NnlsSpectrum NnlsSpectrum;

/**
 * Sector with its index `m` and open interval; an infinite end is reported as ±infinity.
 */
typedef struct NnlsRaySector {
  enum NnlsSector sector;
  size_t m;
  double lower;
  double upper;
} NnlsRaySector;

/**
 * Grid and time stepping of a simulation. Fill with [`nnls_sim_options_default`].
 */
typedef struct NnlsSimOptions {
  double half_length;
  size_t points;
  double dt;
  double t_final;
  double mollify_width;
  double seam_fraction;
  double buffer_safety;
  double blowup_factor;
} NnlsSimOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *nnls_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *nnls_version(void);

/**
 * Builds the spectral data of the step `(A, B, R)`.
 *
 * # Safety
 * `out` must be null or valid for a pointer write.
 */
enum NnlsStatus nnls_spectrum_new(double a, double b, double r, struct NnlsSpectrum **out);

/**
 * # Safety
 * `h` must be null or a handle from [`nnls_spectrum_new`] not yet freed.
 */
void nnls_spectrum_free(struct NnlsSpectrum *h);

/**
 * Case and winding count `n`.
 *
 * # Safety
 * `h` must be a live handle; `case_out` and `n_out` must be valid for writes.
 */
enum NnlsStatus nnls_spectrum_case(const struct NnlsSpectrum *h,
                                   enum NnlsCase *case_out,
                                   size_t *n_out);

/**
 * Winding of `arg(a₁a₂)` at the origin divided by π.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum NnlsStatus nnls_spectrum_winding_over_pi(const struct NnlsSpectrum *h, double *out);

/**
 * Imaginary zero `i·k₀` of `a₁`; [`NnlsStatus::NotAvailable`] when there is none.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum NnlsStatus nnls_spectrum_k0(const struct NnlsSpectrum *h, double *out);

/**
 * Number of zero pairs `pⱼ, −p̄ⱼ` off the imaginary axis.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum NnlsStatus nnls_spectrum_pair_count(const struct NnlsSpectrum *h, size_t *out);

/**
 * Zero `pⱼ` (negative real part) of pair `index`, ordered by decreasing real part.
 *
 * # Safety
 * `h` must be a live handle; `re` and `im` must be valid for writes.
 */
enum NnlsStatus nnls_spectrum_pair(const struct NnlsSpectrum *h,
                                   size_t index,
                                   double *re,
                                   double *im);

/**
 * `a₁(k)` at a complex point.
 *
 * # Safety
 * `h` must be a live handle; `re` and `im` must be valid for writes.
 */
enum NnlsStatus nnls_spectrum_a1(const struct NnlsSpectrum *h,
                                 double k_re,
                                 double k_im,
                                 double *re,
                                 double *im);

/**
 * Reflection coefficients `r₁(k)`, `r₂(k)` at real `k`, as `[re, im]` pairs.
 *
 * # Safety
 * `h` must be a live handle; `r1` and `r2` must each be valid for two `double` writes.
 */
enum NnlsStatus nnls_spectrum_reflection(const struct NnlsSpectrum *h,
                                         double k,
                                         double *r1,
                                         double *r2);

/**
 * Sector of the ray `xi`. A boundary ray gives [`NnlsStatus::BoundaryRay`].
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum NnlsStatus nnls_classify_ray(const struct NnlsSpectrum *h,
                                  double xi,
                                  struct NnlsRaySector *out);

/**
 * Leading asymptotic term `q_as(x, t)`, `t > 0`.
 *
 * # Safety
 * `h` must be a live handle; `re` and `im` must be valid for writes.
 */
enum NnlsStatus nnls_asymptote(const struct NnlsSpectrum *h,
                               double x,
                               double t,
                               double *re,
                               double *im);

/**
 * Default simulation options for the step of `h`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum NnlsStatus nnls_sim_options_default(const struct NnlsSpectrum *h, struct NnlsSimOptions *out);

/**
 * Evolves the mollified step and keeps the fields at `times[0..count]`.
 *
 * A run that diverges still returns [`NnlsStatus::Ok`] with a handle; check
 * [`nnls_evolution_diverged`]. Its last snapshot is then the last good state.
 *
 * # Safety
 * `h` must be a live handle, `opts` readable, `times` readable for `count` values
 * (or null with `count == 0`), and `out` valid for a pointer write.
 */
enum NnlsStatus nnls_simulate(const struct NnlsSpectrum *h,
                              const struct NnlsSimOptions *opts,
                              const double *times,
                              size_t count,
                              struct NnlsEvolution **out);

/**
 * # Safety
 * `e` must be null or a handle from [`nnls_simulate`] not yet freed.
 */
void nnls_evolution_free(struct NnlsEvolution *e);

/**
 * Number of stored snapshots.
 *
 * # Safety
 * `e` must be a live handle; `out` must be valid for a write.
 */
enum NnlsStatus nnls_evolution_snapshot_count(const struct NnlsEvolution *e, size_t *out);

/**
 * Whether the run stopped early, and at which time.
 *
 * # Safety
 * `e` must be a live handle; `diverged` and `t` must be valid for writes.
 */
enum NnlsStatus nnls_evolution_diverged(const struct NnlsEvolution *e, bool *diverged, double *t);

/**
 * Copies snapshot `index`: its time, and `2·N` doubles `[re₀, im₀, re₁, …]` on the nodes
 * `x_j = −L + 2jL/N`. `capacity` is the length of `values` in doubles.
 *
 * # Safety
 * `e` must be a live handle, `t` valid for a write and `values` valid for `capacity` writes.
 */
enum NnlsStatus nnls_evolution_snapshot(const struct NnlsEvolution *e,
                                        size_t index,
                                        double *t,
                                        double *values,
                                        size_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NNLS_SPECTRA_H */
