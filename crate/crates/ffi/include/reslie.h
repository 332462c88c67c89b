#ifndef RESLIE_H
#define RESLIE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ReslieCoefficients {
  RESLIE_COEFFICIENTS_ADJOINT = 0,
  RESLIE_COEFFICIENTS_TRIVIAL = 1,
} ReslieCoefficients;

typedef enum ReslieStatus {
  RESLIE_STATUS_OK = 0,
  RESLIE_STATUS_NULL_POINTER = 1,
  RESLIE_STATUS_INVALID_UTF8 = 2,
  RESLIE_STATUS_PARSE = 3,
  RESLIE_STATUS_INVALID_ARGUMENT = 4,
  RESLIE_STATUS_UNSUPPORTED = 5,
  RESLIE_STATUS_PANIC = 6,
} ReslieStatus;

/**
 * Opaque restricted Lie algebra.
 */
typedef struct ReslieAlgebra ReslieAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *reslie_last_error(void);

/**
 * Parses an algebra description (JSON) and checks its axioms.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ReslieStatus reslie_algebra_from_json(const char *json, struct ReslieAlgebra **out);

/**
 * Heisenberg algebra `[x, y] = z` with `e^[p] = θ(e) z`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ReslieStatus reslie_algebra_heisenberg(uint32_t p,
                                            int64_t theta_x,
                                            int64_t theta_y,
                                            int64_t theta_z,
                                            struct ReslieAlgebra **out);

/**
 * Witt algebra `W(1)` for `p >= 5`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ReslieStatus reslie_algebra_witt(uint32_t p, struct ReslieAlgebra **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `alg` must come from a `reslie_algebra_*` constructor and not be used afterwards.
 */
void reslie_algebra_free(struct ReslieAlgebra *alg);

/**
 * Dimension and characteristic of an algebra.
 *
 * # Safety
 * `alg` must be a live handle; `dim` and `p` valid pointers.
 */
enum ReslieStatus reslie_algebra_shape(const struct ReslieAlgebra *alg, size_t *dim, uint32_t *p);

/**
 * Evaluates the p-map on a coordinate vector of length `dim`; coordinates
 * are reduced mod p.
 *
 * # Safety
 * `x` and `out` must point to `len` values and `len` must equal the dimension.
 */
enum ReslieStatus reslie_pmap_eval(const struct ReslieAlgebra *alg,
                                   const uint32_t *x,
                                   uint32_t *out,
                                   size_t len);

/**
 * Dimension of the restricted cohomology `H^q_*` (or the ordinary one when
 * `restricted` is false) with adjoint or trivial coefficients.
 *
 * # Safety
 * `alg` must be a live handle and `dim` a valid pointer.
 */
enum ReslieStatus reslie_cohomology_dim(const struct ReslieAlgebra *alg,
                                        size_t degree,
                                        enum ReslieCoefficients coefficients,
                                        bool restricted,
                                        size_t *dim);

/**
 * Checks a deformation jet (JSON jet description) over the algebra.
 * `passed` receives whether every identity holds up to the jet order.
 *
 * # Safety
 * `alg` must be a live handle, `jet_json` a NUL-terminated string and
 * `passed` a valid pointer.
 */
enum ReslieStatus reslie_deformation_check(const struct ReslieAlgebra *alg,
                                           const char *jet_json,
                                           bool *passed);

/**
 * Number of isomorphism classes of p-structures on the Heisenberg algebra
 * over the algebraic closure and over `F_p`, for `p <= 7`.
 *
 * # Safety
 * `classes` and `fp_classes` must be valid pointers.
 */
enum ReslieStatus reslie_classify_heisenberg(uint32_t p, size_t *classes, size_t *fp_classes);

/**
 * JSON description of an algebra; release with `reslie_string_free`.
 * Returns null on failure.
 *
 * # Safety
 * `alg` must be a live handle.
 */
char *reslie_algebra_to_json(const struct ReslieAlgebra *alg);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from `reslie_algebra_to_json` and not be used afterwards.
 */
void reslie_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESLIE_H */
