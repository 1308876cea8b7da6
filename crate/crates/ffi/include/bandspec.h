#ifndef BANDSPEC_H
#define BANDSPEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BandspecStatus {
  BANDSPEC_STATUS_OK = 0,
  BANDSPEC_STATUS_NULL_POINTER = 1,
  BANDSPEC_STATUS_INVALID_ARGUMENT = 2,
  BANDSPEC_STATUS_DOMAIN = 3,
  BANDSPEC_STATUS_NUMERICAL = 4,
  BANDSPEC_STATUS_PANIC = 5,
} BandspecStatus;

/**
 * Channel ensemble parameters.
 */
typedef struct BandspecChannel BandspecChannel;

/**
 * Sorted eigenvalues of one Gram matrix realization.
 */
typedef struct BandspecSpectrum BandspecSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *bandspec_last_error_message(void);

/**
 * Symmetric-law Wyner channel: `alpha` below and `beta` above the block
 * diagonal, all taps drawn from `fading` (e.g. `"rayleigh"`).
 *
 * # Safety
 * `fading` must be a NUL-terminated string; `out` must be writable.
 */
enum BandspecStatus bandspec_channel_wyner(size_t n,
                                           size_t k,
                                           double alpha,
                                           double beta,
                                           const char *fading,
                                           double power,
                                           struct BandspecChannel **out);

/**
 * Two-tap channel (`K = 1`): `fading_a` on the diagonal, `fading_b` one
 * column to the left.
 *
 * # Safety
 * Both tags must be NUL-terminated strings; `out` must be writable.
 */
enum BandspecStatus bandspec_channel_two_diagonal(size_t n,
                                                  const char *fading_a,
                                                  const char *fading_b,
                                                  double power,
                                                  struct BandspecChannel **out);

/**
 * # Safety
 * `channel` must come from a `bandspec_channel_*` constructor and not be
 * used afterwards. NULL is ignored.
 */
void bandspec_channel_free(struct BandspecChannel *channel);

/**
 * Eigenvalues of `HH†` for the realization drawn from stream `index` of
 * `seed`.
 *
 * # Safety
 * `channel` must be a live handle; `out` must be writable.
 */
enum BandspecStatus bandspec_spectrum_sample(const struct BandspecChannel *channel,
                                             uint64_t seed,
                                             uint64_t index,
                                             struct BandspecSpectrum **out);

/**
 * Number of eigenvalues; 0 for NULL.
 *
 * # Safety
 * `spectrum` must be NULL or a live handle.
 */
size_t bandspec_spectrum_len(const struct BandspecSpectrum *spectrum);

/**
 * Copies up to `capacity` eigenvalues (ascending) into `buf` and stores the
 * number written in `written`.
 *
 * # Safety
 * `buf` must hold `capacity` doubles; `spectrum` must be a live handle.
 */
enum BandspecStatus bandspec_spectrum_copy(const struct BandspecSpectrum *spectrum,
                                           double *buf,
                                           size_t capacity,
                                           size_t *written);

/**
 * `(1/N)·Σ ln(1 + rho·λ)` in nats.
 *
 * # Safety
 * `spectrum` must be a live handle; `out` must be writable.
 */
enum BandspecStatus bandspec_spectrum_shannon(const struct BandspecSpectrum *spectrum,
                                              double rho,
                                              double *out);

/**
 * # Safety
 * `spectrum` must come from [`bandspec_spectrum_sample`] and not be used
 * afterwards. NULL is ignored.
 */
void bandspec_spectrum_free(struct BandspecSpectrum *spectrum);

/**
 * Per-cell capacity `(1/N)·ln det(I + (P/K)·HH†)` of one realization,
 * through banded LDL.
 *
 * # Safety
 * `channel` must be a live handle; `out` must be writable.
 */
enum BandspecStatus bandspec_capacity_sample(const struct BandspecChannel *channel,
                                             uint64_t seed,
                                             uint64_t index,
                                             double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BandspecStatus bandspec_wyner_capacity_nonfading(double power, double alpha, double *out);

/**
 * Large-K Wyner capacity with second moment `m2` and mean `mu_re + i·mu_im`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BandspecStatus bandspec_wyner_capacity_large_k(double power,
                                                    double alpha,
                                                    double m2,
                                                    double mu_re,
                                                    double mu_im,
                                                    double *out);

/**
 * Writes `M1, M2, M3` to `out[0..3]`.
 *
 * # Safety
 * `out` must hold three doubles.
 */
enum BandspecStatus bandspec_limiting_moments(double m2,
                                              double m4,
                                              double m6,
                                              double alpha,
                                              double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BandspecStatus bandspec_exp_integral(double x, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BandspecStatus bandspec_narula_stationary_pdf(double x, double pbar, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BandspecStatus bandspec_narula_stationary_cdf(double x, double pbar, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BandspecStatus bandspec_narula_capacity(double pbar, double *out);

/**
 * Minimum `Eb/N0` (linear) and wideband slope.
 *
 * # Safety
 * Both out-pointers must be writable.
 */
enum BandspecStatus bandspec_low_snr_params(size_t k,
                                            double alpha,
                                            double m2,
                                            double m4,
                                            double *eb_n0_min,
                                            double *s0);

/**
 * High-SNR slope and power offset (3-dB units) of the two-tap channel.
 *
 * # Safety
 * Tags must be NUL-terminated strings; out-pointers must be writable.
 */
enum BandspecStatus bandspec_high_snr_params(const char *fading_a,
                                             const char *fading_b,
                                             double *s_inf,
                                             double *l_inf);

/**
 * Marchenko–Pastur CDF with ratio `1/K` and scale `sigma2`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BandspecStatus bandspec_marchenko_pastur_cdf(double x, size_t k, double sigma2, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BANDSPEC_H */
