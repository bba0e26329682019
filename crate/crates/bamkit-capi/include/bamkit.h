#ifndef BAMKIT_H
#define BAMKIT_H

/* Generated by cbindgen from bamkit-capi; regenerate instead of editing. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function.
 */
typedef enum bamkit_status {
  BAMKIT_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BAMKIT_ERR_NULL_ARGUMENT = 1,
  /**
   * A value argument was out of range or inconsistent.
   */
  BAMKIT_ERR_INVALID_ARGUMENT = 2,
  /**
   * Vector or matrix dimensions disagree.
   */
  BAMKIT_ERR_DIMENSION_MISMATCH = 3,
  /**
   * Certification found a counterexample; see `bamkit_last_error`.
   */
  BAMKIT_ERR_REFUTED = 4,
  /**
   * The operation is not defined for these inputs.
   */
  BAMKIT_ERR_UNSUPPORTED = 5,
  /**
   * An unexpected internal failure; see `bamkit_last_error`.
   */
  BAMKIT_ERR_INTERNAL = 6,
} bamkit_status;

/**
 * Contraction certificate handle.
 */
typedef struct bamkit_cert bamkit_cert;

/**
 * Operator expression handle.
 */
typedef struct bamkit_op bamkit_op;

/**
 * Closed convex set handle.
 */
typedef struct bamkit_set bamkit_set;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread; empty when no error has occurred.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *bamkit_last_error(void);

/**
 * Library version as a static string.
 */
const char *bamkit_version(void);

/**
 * Closed ball with the given center and radius.
 */
enum bamkit_status bamkit_set_ball(const double *center,
                                   size_t dim,
                                   double radius,
                                   struct bamkit_set **out);

/**
 * Affine subspace through `anchor` spanned by `count` direction vectors,
 * stored row-major as `count * dim` doubles. `count` may be zero for a
 * single point.
 */
enum bamkit_status bamkit_set_affine(const double *anchor,
                                     size_t dim,
                                     const double *spanning,
                                     size_t count,
                                     struct bamkit_set **out);

/**
 * Nonnegative orthant of the given dimension.
 */
enum bamkit_status bamkit_set_orthant(size_t dim, struct bamkit_set **out);

/**
 * Nonnegative orthant capped at the given radius.
 */
enum bamkit_status bamkit_set_orthant_ball(size_t dim, double radius, struct bamkit_set **out);

/**
 * One-point set.
 */
enum bamkit_status bamkit_set_singleton(const double *point, size_t dim, struct bamkit_set **out);

/**
 * Releases a set handle. Null is ignored.
 */
void bamkit_set_free(struct bamkit_set *set);

/**
 * Ambient dimension of the set, or zero for a null handle.
 */
size_t bamkit_set_dim(const struct bamkit_set *set);

/**
 * Writes the nearest point of the set to `x` into `out` (`dim` doubles).
 */
enum bamkit_status bamkit_set_project(const struct bamkit_set *set,
                                      const double *x,
                                      size_t dim,
                                      double *out);

/**
 * Sets `*out` to 1 when `x` lies in the set within `tol`, else 0.
 */
enum bamkit_status bamkit_set_contains(const struct bamkit_set *set,
                                       const double *x,
                                       size_t dim,
                                       double tol,
                                       int32_t *out);

/**
 * Identity map on `dim` coordinates.
 */
enum bamkit_status bamkit_op_identity(size_t dim, struct bamkit_op **out);

/**
 * Nearest-point projector onto the set. The set handle is copied and may
 * be freed afterwards.
 */
enum bamkit_status bamkit_op_projector(const struct bamkit_set *set, struct bamkit_op **out);

/**
 * Reflection through the set: twice the projection minus the identity.
 */
enum bamkit_status bamkit_op_reflector(const struct bamkit_set *set, struct bamkit_op **out);

/**
 * Blend `gamma * x + (1 - gamma) * base(x)` with `gamma` in [0, 1].
 */
enum bamkit_status bamkit_op_averaged(const struct bamkit_op *base,
                                      double gamma,
                                      struct bamkit_op **out);

/**
 * Composition of `count` operators listed in application order:
 * `ops[0]` acts first. Handles are copied.
 */
enum bamkit_status bamkit_op_compose(const struct bamkit_op *const *ops,
                                     size_t count,
                                     struct bamkit_op **out);

/**
 * Convex combination with the given weights (positive, summing to one).
 */
enum bamkit_status bamkit_op_combine(const double *weights,
                                     const struct bamkit_op *const *ops,
                                     size_t count,
                                     struct bamkit_op **out);

/**
 * Releases an operator handle. Null is ignored.
 */
void bamkit_op_free(struct bamkit_op *op);

/**
 * Ambient dimension of the operator, or zero for a null handle.
 */
size_t bamkit_op_dim(const struct bamkit_op *op);

/**
 * Applies the operator to `x`, writing `dim` doubles into `out`.
 */
enum bamkit_status bamkit_op_eval(const struct bamkit_op *op,
                                  const double *x,
                                  size_t dim,
                                  double *out);

/**
 * Samples `count` points from the box with the given `center` and
 * `half_width` and certifies that `op` contracts toward `fixed_set`. On
 * success `*out` holds the certificate; when sampling finds a
 * counterexample the call returns `BAMKIT_ERR_REFUTED` and the message
 * from `bamkit_last_error` describes the witness.
 */
enum bamkit_status bamkit_certify(const struct bamkit_op *op,
                                  const struct bamkit_set *fixed_set,
                                  uint64_t seed,
                                  size_t count,
                                  const double *center,
                                  size_t dim,
                                  double half_width,
                                  struct bamkit_cert **out);

/**
 * Releases a certificate handle. Null is ignored.
 */
void bamkit_cert_free(struct bamkit_cert *cert);

/**
 * Contraction factor in [0, 1), or NaN for a null handle.
 */
double bamkit_cert_gamma(const struct bamkit_cert *cert);

/**
 * Regularity constant `1 / (1 - gamma)`, or NaN for a null handle.
 */
double bamkit_cert_kappa(const struct bamkit_cert *cert);

/**
 * Projects `x` onto the certificate's fixed set.
 */
enum bamkit_status bamkit_cert_project_fixed(const struct bamkit_cert *cert,
                                             const double *x,
                                             size_t dim,
                                             double *out);

/**
 * Runs `steps` applications of `op` from `x0` and writes the distance to
 * the certificate's fixed set after each application into `errors`
 * (`steps + 1` doubles, starting with the distance at `x0`).
 */
enum bamkit_status bamkit_iterate_errors(const struct bamkit_op *op,
                                         const struct bamkit_cert *cert,
                                         const double *x0,
                                         size_t dim,
                                         size_t steps,
                                         double *errors);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BAMKIT_H */
