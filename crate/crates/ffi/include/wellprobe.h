#ifndef WELLPROBE_H
#define WELLPROBE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WpStatus {
  WP_STATUS_OK = 0,
  WP_STATUS_INVALID_PARAMETER = 1,
  WP_STATUS_DOMAIN = 2,
  WP_STATUS_QUADRATURE = 3,
  WP_STATUS_FIT_RESIDUAL = 4,
  WP_STATUS_FLAT_LIKELIHOOD = 5,
  WP_STATUS_NULL_POINTER = 6,
  WP_STATUS_INTERNAL = 7,
  WP_STATUS_PANIC = 8,
} WpStatus;

/*
 Opaque probe state.
 */
typedef struct WpState WpState;

/*
 Opaque well configuration (width and series truncation).
 */
typedef struct WpWell WpWell;

/*
 Summary of a Monte Carlo Cramér-Rao experiment.
 */
typedef struct WpCrlbResult {
  double mean;
  double variance;
  /*
   `M · Var · F(a)`.
   */
  double crlb_ratio;
  double fisher;
  size_t measurements;
  size_t replicas;
  size_t boundary_hits;
} WpCrlbResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *wp_last_error(void);

/*
 Creates a well of the given width. `truncation = 0` selects the default.
 */
enum WpStatus wp_well_new(double width, size_t truncation, struct WpWell **out);

/*
 # Safety
 `well` must come from [`wp_well_new`] and not be freed twice.
 */
void wp_well_free(struct WpWell *well);

enum WpStatus wp_state_eigen(uint32_t n, struct WpState **out);

/*
 `cos α |ψ_n⟩ + sin α |ψ_m⟩`.
 */
enum WpStatus wp_state_superposition(uint32_t n, uint32_t m, double alpha, struct WpState **out);

enum WpStatus wp_state_polynomial(uint32_t p, struct WpState **out);

enum WpStatus wp_state_parabolic(struct WpState **out);

/*
 Unit-norm real amplitudes `f_1 … f_len` in the eigenbasis.

 # Safety
 `coefficients` must point to `len` readable doubles.
 */
enum WpStatus wp_state_custom(const double *coefficients, size_t len, struct WpState **out);

/*
 # Safety
 `state` must come from a `wp_state_*` constructor and not be freed twice.
 */
void wp_state_free(struct WpState *state);

/*
 QFI `H(a)` of a stationary probe.

 # Safety
 Handles must be live or null; `out` must be writable.
 */
enum WpStatus wp_qfi_static(const struct WpState *state, const struct WpWell *well, double *out);

/*
 Classical FI of a position measurement.

 # Safety
 Handles must be live or null; `out` must be writable.
 */
enum WpStatus wp_fi_position(const struct WpState *state, const struct WpWell *well, double *out);

/*
 Classical FI of an energy measurement.

 # Safety
 Handles must be live or null; `out` must be writable.
 */
enum WpStatus wp_fi_energy(const struct WpState *state, const struct WpWell *well, double *out);

/*
 # Safety
 `out` must be writable.
 */
enum WpStatus wp_qsnr_eigen(uint32_t n, double *out);

/*
 # Safety
 `well` must be live or null; `out` must be writable.
 */
enum WpStatus wp_qsnr_superposition(uint32_t n,
                                    uint32_t m,
                                    double alpha,
                                    const struct WpWell *well,
                                    double *out);

/*
 # Safety
 `out` must be writable.
 */
enum WpStatus wp_qsnr_polynomial(uint32_t p, double *out);

/*
 QFI after free evolution for time `t`.

 # Safety
 Handles must be live or null; `out` must be writable.
 */
enum WpStatus wp_qfi_time(const struct WpState *state,
                          const struct WpWell *well,
                          double t,
                          double *out);

/*
 Time-dependent QFI of the parabolic state from its closed-form series.

 # Safety
 `well` must be live or null; `out` must be writable.
 */
enum WpStatus wp_qfi_parabolic_time(const struct WpWell *well, double t, double *out);

/*
 # Safety
 `out` must be writable.
 */
enum WpStatus wp_qsnr_two_eigen(uint32_t n1, uint32_t n2, double *out);

/*
 # Safety
 `out` must be writable.
 */
enum WpStatus wp_qsnr_two_polynomial(uint32_t p1, uint32_t p2, double *out);

/*
 # Safety
 `out` must be writable.
 */
enum WpStatus wp_qsnr_w3(uint32_t n1, uint32_t n2, double *out);

/*
 GHZ-like probe `|n_1 … n_N⟩ + |m_1 … m_N⟩` where `m` permutes `n`.

 # Safety
 `n` and `m` must each point to `len` readable integers; `out` must be writable.
 */
enum WpStatus wp_qsnr_ghz(const uint32_t *n, const uint32_t *m, size_t len, double *out);

/*
 Runs `replicas` seeded position-measurement experiments of `m` outcomes
 each and compares the MLE variance with the Cramér-Rao bound.

 # Safety
 Handles must be live or null; `out` must be writable.
 */
enum WpStatus wp_crlb_experiment(const struct WpState *state,
                                 const struct WpWell *well,
                                 size_t m,
                                 size_t replicas,
                                 uint64_t seed,
                                 struct WpCrlbResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WELLPROBE_H */
