#ifndef SSHCAV_H
#define SSHCAV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SshcavStatus {
  SSHCAV_STATUS_OK = 0,
  SSHCAV_STATUS_NULL_POINTER = 1,
  SSHCAV_STATUS_INVALID_ARGUMENT = 2,
  SSHCAV_STATUS_COMPUTATION_FAILED = 3,
  SSHCAV_STATUS_PANIC = 4,
} SshcavStatus;

// Opaque cavity model handle.
typedef struct SshcavModel SshcavModel;

// Kerr fit of the self-consistent photon ladder. Complex values are split
// into real and imaginary parts.
typedef struct SshcavKerr {
  double omega0_re;
  double omega0_im;
  double u_re;
  double u_im;
  double u_prime_re;
  double u_prime_im;
  double fit_residual;
} SshcavKerr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *sshcav_version(void);

// Copy the calling thread's last error message into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length excluding the NUL, so
// a caller can size a buffer by passing `len = 0`.
//
// # Safety
// `buf` must be valid for `len` bytes, or null when `len` is 0.
size_t sshcav_last_error_message(char *buf, size_t len);

// `Delta(k) = 2 |t1 + t2 e^{-ik}|`.
//
// # Safety
// `out` must be a valid pointer to a `double`.
enum SshcavStatus sshcav_band_gap(double t1, double t2, double k, double *out);

// Zak phase of the lower band, folded to `[0, 2 pi)`.
//
// # Safety
// `out` must be a valid pointer to a `double`.
enum SshcavStatus sshcav_zak_phase(double t1, double t2, size_t n_k, double *out);

// Build a cavity model; on success `*out` owns a new handle.
//
// # Safety
// `out` must be a valid pointer to a handle pointer.
enum SshcavStatus sshcav_model_new(double t1,
                                   double t2,
                                   double omega_c,
                                   double mass_beta,
                                   double g,
                                   double eta,
                                   size_t n_k,
                                   struct SshcavModel **out);

// Release a handle from [`sshcav_model_new`]. Null is a no-op.
//
// # Safety
// `model` must be null or a live handle not freed before.
void sshcav_model_free(struct SshcavModel *model);

// Photon self-energy `Sigma(omega, n) = (n + 1) Sigma(omega)`.
//
// # Safety
// `model` must be a live handle; `re` and `im` valid `double` pointers.
enum SshcavStatus sshcav_model_self_energy(const struct SshcavModel *model,
                                           double omega,
                                           uint32_t photon_number,
                                           double *re,
                                           double *im);

// Photon spectral function `A(omega, q)`.
//
// # Safety
// `model` must be a live handle; `out` a valid `double` pointer.
enum SshcavStatus sshcav_model_spectral(const struct SshcavModel *model,
                                        double omega,
                                        double q,
                                        double *out);

// Solve the photon ladder for `n = 0..=n_max` and fit the Kerr shift.
//
// # Safety
// `model` must be a live handle; `out` a valid [`SshcavKerr`] pointer.
enum SshcavStatus sshcav_model_kerr(const struct SshcavModel *model,
                                    uint32_t n_max,
                                    double tol,
                                    size_t max_iter,
                                    struct SshcavKerr *out);

// Four-photon vertex by direct Brillouin-zone summation on `n_k2d` points
// per axis.
//
// # Safety
// `re` and `im` must be valid `double` pointers.
enum SshcavStatus sshcav_gamma4_direct(double t1,
                                       double t2,
                                       double eta,
                                       double v0,
                                       double zeta,
                                       size_t n_k2d,
                                       double omega1,
                                       double omega2,
                                       double *re,
                                       double *im);

// Entanglement entropy (nats) of an `n x n` two-photon amplitude stored
// row-major on the grid `[start, stop]`. `im` may be null for a real state.
//
// # Safety
// `re` (and `im` if non-null) must point to `n * n` doubles; `out` must be
// a valid `double` pointer.
enum SshcavStatus sshcav_schmidt_entropy(const double *re,
                                         const double *im,
                                         size_t n,
                                         double start,
                                         double stop,
                                         double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSHCAV_H */
