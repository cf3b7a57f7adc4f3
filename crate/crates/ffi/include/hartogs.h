#ifndef HARTOGS_H
#define HARTOGS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HartogsStatus {
  HARTOGS_STATUS_OK = 0,
  HARTOGS_STATUS_NULL_POINTER = 1,
  HARTOGS_STATUS_INVALID_ARGUMENT = 2,
  HARTOGS_STATUS_OUTSIDE_DOMAIN = 3,
  HARTOGS_STATUS_UNSUPPORTED_DOMAIN = 4,
  HARTOGS_STATUS_PRECONDITION = 5,
  HARTOGS_STATUS_SINGULAR_EVALUATION = 6,
  HARTOGS_STATUS_NONCONVERGENT_TRUNCATION = 7,
  HARTOGS_STATUS_SAMPLER_EXHAUSTED = 8,
  HARTOGS_STATUS_PARSE = 9,
  HARTOGS_STATUS_PANIC = 10,
} HartogsStatus;

/**
 * Opaque domain handle.
 */
typedef struct HartogsDomain HartogsDomain;

typedef struct HartogsComplex {
  double re;
  double im;
} HartogsComplex;

typedef struct HartogsPoint {
  struct HartogsComplex z1;
  struct HartogsComplex z2;
} HartogsPoint;

typedef struct HartogsKernelValue {
  struct HartogsComplex value;
  struct HartogsComplex numerator;
  struct HartogsComplex denominator;
  /**
   * Denominator below the library's singularity threshold.
   */
  bool near_singular;
} HartogsKernelValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a domain name: `fat:K`, `thin:K`, `classical`, `bidisc` or `punctured-bidisc`.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string; `out` must be writable.
 */
enum HartogsStatus hartogs_domain_parse(const char *spec, struct HartogsDomain **out);

/**
 * The fat triangle `{|z1|^k < |z2| < 1}`, `k >= 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HartogsStatus hartogs_domain_fat(uint32_t k, struct HartogsDomain **out);

/**
 * The thin triangle `{|z1| < |z2|^k < 1}`, `k >= 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HartogsStatus hartogs_domain_thin(uint32_t k, struct HartogsDomain **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `domain` must come from a `hartogs_domain_*` constructor and not be used afterwards.
 */
void hartogs_domain_free(struct HartogsDomain *domain);

/**
 * Writes the canonical domain name into `buf`; returns its length without the NUL.
 *
 * # Safety
 * `domain` must be a live handle; `buf` must hold `len` bytes or be null.
 */
size_t hartogs_domain_name(const struct HartogsDomain *domain, char *buf, size_t len);

/**
 * # Safety
 * Pointers must be valid.
 */
enum HartogsStatus hartogs_domain_contains(const struct HartogsDomain *domain,
                                           const struct HartogsPoint *p,
                                           bool *out);

/**
 * Euclidean distance from an interior point to the boundary.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HartogsStatus hartogs_domain_boundary_distance(const struct HartogsDomain *domain,
                                                    const struct HartogsPoint *p,
                                                    double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum HartogsStatus hartogs_domain_volume(const struct HartogsDomain *domain, double *out);

/**
 * Closed-form Bergman kernel `B(z, w)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HartogsStatus hartogs_kernel(const struct HartogsDomain *domain,
                                  const struct HartogsPoint *z,
                                  const struct HartogsPoint *w,
                                  struct HartogsKernelValue *out);

/**
 * `B(z, z)`, real and positive.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HartogsStatus hartogs_diagonal(const struct HartogsDomain *domain,
                                    const struct HartogsPoint *z,
                                    double *out);

/**
 * Kernel from the orthonormal monomial series, truncated until the tail
 * bound is below `tol` relative to the sum. `tail` may be null.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HartogsStatus hartogs_kernel_series(const struct HartogsDomain *domain,
                                         const struct HartogsPoint *z,
                                         const struct HartogsPoint *w,
                                         double tol,
                                         struct HartogsComplex *out,
                                         double *tail);

/**
 * Relative residual of Bell's rule for the power map `H_1 → H_k`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum HartogsStatus hartogs_bell_residual(uint32_t k,
                                         const struct HartogsPoint *z,
                                         const struct HartogsPoint *w,
                                         double *out);

/**
 * A pair `z, w` in the fat triangle of exponent `k >= 2` at which the kernel vanishes.
 *
 * # Safety
 * Out-pointers must be writable; `numerator_abs` may be null.
 */
enum HartogsStatus hartogs_zero_witness(uint32_t k,
                                        struct HartogsPoint *z,
                                        struct HartogsPoint *w,
                                        double *numerator_abs);

/**
 * Exact check of the numerator coefficient identities for `2 <= k <= k_max`.
 *
 * # Safety
 * `all_passed` must be writable.
 */
enum HartogsStatus hartogs_verify_identities(uint32_t k_max, bool *all_passed);

/**
 * Message for the last failed call on this thread; returns its length
 * without the NUL (0 after a successful call).
 *
 * # Safety
 * `buf` must hold `len` bytes or be null.
 */
size_t hartogs_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hartogs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARTOGS_H */
