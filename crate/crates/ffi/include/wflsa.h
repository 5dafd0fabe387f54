/* SPDX-License-Identifier: Apache-2.0 */

#ifndef WFLSA_H
#define WFLSA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum WflsaStatus {
  WFLSA_STATUS_OK = 0,
  WFLSA_STATUS_NULL_POINTER = 1,
  WFLSA_STATUS_DIMENSION_MISMATCH = 2,
  WFLSA_STATUS_INVALID_WEIGHTS = 3,
  WFLSA_STATUS_INVALID_CONFIG = 4,
  WFLSA_STATUS_INVALID_IMAGE = 5,
  WFLSA_STATUS_BUFFER_TOO_SMALL = 6,
  WFLSA_STATUS_PANIC = 7,
  WFLSA_STATUS_OTHER = 8,
} WflsaStatus;

// Opaque solver result.
typedef struct WflsaSolution WflsaSolution;

// Opaque symmetric weight matrix.
typedef struct WflsaWeights WflsaWeights;

// Solver settings. A `q_override` that is not a positive finite number
// selects the automatic step bound.
typedef struct WflsaConfig {
  double lambda1;
  double lambda2;
  double rho;
  double eps;
  size_t max_iter;
  double q_override;
} WflsaConfig;

// Scalar diagnostics of a solution.
typedef struct WflsaSolutionInfo {
  size_t p;
  size_t iterations;
  bool converged;
  double final_delta;
  double q_used;
  double objective;
  double lambda1;
  double lambda2;
} WflsaSolutionInfo;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default settings for the given penalties.
struct WflsaConfig wflsa_config_default(double lambda1, double lambda2);

// Static description of a status code. Never null.
const char *wflsa_status_string(enum WflsaStatus status);

// Message of the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call on this thread.
const char *wflsa_last_error_message(void);

// Builds weights from a row-major `p × p` symmetric matrix.
//
// # Safety
// `data` must point to `p * p` readable doubles and `out` must be writable.
enum WflsaStatus wflsa_weights_new(size_t p, const double *data, struct WflsaWeights **out);

// # Safety
// `weights` must be null or a handle from [`wflsa_weights_new`] not yet freed.
void wflsa_weights_free(struct WflsaWeights *weights);

// Number of vertices.
//
// # Safety
// `weights` must be a live handle.
size_t wflsa_weights_p(const struct WflsaWeights *weights);

// Gershgorin upper bound on the largest eigenvalue of `λ₂² DᵀD`.
//
// # Safety
// `weights` must be a live handle and `out` writable.
enum WflsaStatus wflsa_gershgorin_q_bound(const struct WflsaWeights *weights,
                                          double lambda2,
                                          double *out);

// `sign(x) · max(|x| − λ₁, 0)`.
double wflsa_soft_threshold(double lambda1, double x);

// Solves the problem for observations `y` of length `p`.
//
// # Safety
// `weights` must be a live handle, `y` must hold `p` doubles, `config` must be
// readable and `out` writable.
enum WflsaStatus wflsa_solve(const struct WflsaWeights *weights,
                             const double *y,
                             size_t p,
                             const struct WflsaConfig *config,
                             struct WflsaSolution **out);

// # Safety
// `solution` must be null or a live handle.
void wflsa_solution_free(struct WflsaSolution *solution);

// # Safety
// `solution` must be a live handle and `out` writable.
enum WflsaStatus wflsa_solution_info(const struct WflsaSolution *solution,
                                     struct WflsaSolutionInfo *out);

// Copies the estimate into `buf`, which must hold at least `p` values.
//
// # Safety
// `solution` must be a live handle and `buf` must hold `len` writable doubles.
enum WflsaStatus wflsa_solution_beta(const struct WflsaSolution *solution, double *buf, size_t len);

// Copies the estimate at `λ₁ = 0` into `buf`.
//
// # Safety
// As for [`wflsa_solution_beta`].
enum WflsaStatus wflsa_solution_beta_unthresholded(const struct WflsaSolution *solution,
                                                   double *buf,
                                                   size_t len);

// Moves a solution to a new `λ₁` by soft-thresholding, without re-solving.
//
// # Safety
// `solution` must be a live handle and `out` writable.
enum WflsaStatus wflsa_solution_rethreshold(const struct WflsaSolution *solution,
                                            double lambda1,
                                            struct WflsaSolution **out);

// Adds Gaussian noise whose deviation grows linearly from the image center to
// `max_sigma` at the corners. Writes the noisy image and the normalized
// distance map used as noise intensity.
//
// # Safety
// `image`, `noisy_out` and `intensity_out` must each hold `height * width` doubles.
enum WflsaStatus wflsa_radial_noise(const double *image,
                                    size_t height,
                                    size_t width,
                                    double max_sigma,
                                    uint64_t seed,
                                    double *noisy_out,
                                    double *intensity_out);

// Patch-wise smoothing of `noisy` guided by `intensity`. `config` supplies the
// solver settings; its penalties are replaced by `lambda1` and `lambda2`.
//
// # Safety
// `noisy`, `intensity` and `out` must each hold `height * width` doubles and
// `config` must be readable.
enum WflsaStatus wflsa_denoise(const double *noisy,
                               const double *intensity,
                               size_t height,
                               size_t width,
                               size_t patch_h,
                               size_t patch_w,
                               size_t stride,
                               double lambda1,
                               double lambda2,
                               const struct WflsaConfig *config,
                               double *out);

// Median filter with odd window sides and replicated borders.
//
// # Safety
// `image` and `out` must each hold `height * width` doubles.
enum WflsaStatus wflsa_median_filter(const double *image,
                                     size_t height,
                                     size_t width,
                                     size_t win_h,
                                     size_t win_w,
                                     double *out);

// Peak signal-to-noise ratio in dB with peak 1; infinite for identical images.
//
// # Safety
// `a` and `b` must each hold `height * width` doubles and `out` must be writable.
enum WflsaStatus wflsa_psnr(const double *a,
                            const double *b,
                            size_t height,
                            size_t width,
                            double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WFLSA_H */
