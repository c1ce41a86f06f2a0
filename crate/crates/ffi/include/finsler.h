#ifndef FINSLER_H
#define FINSLER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FinslerStatus {
  FINSLER_STATUS_OK = 0,
  FINSLER_STATUS_NULL_POINTER = 1,
  FINSLER_STATUS_INVALID_ARGUMENT = 2,
  FINSLER_STATUS_UNKNOWN_FIXTURE = 3,
  FINSLER_STATUS_INVALID_PARAMS = 4,
  FINSLER_STATUS_DOMAIN = 5,
  FINSLER_STATUS_DEGENERATE_METRIC = 6,
  FINSLER_STATUS_INTERNAL = 7,
} FinslerStatus;

// Opaque handle to a metric fixture.
typedef struct FinslerFixture FinslerFixture;

// Sampling and tolerance settings for the report functions.
typedef struct FinslerRunConfig {
  size_t samples;
  uint64_t seed;
  double tol_identity;
  double tol_zero;
  // 0 uses the global thread pool.
  size_t threads;
} FinslerRunConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a built-in fixture. `params` is a comma-separated `key=value`
// list and may be null or empty for the defaults.
//
// # Safety
// `name` and a non-null `params` must be nul-terminated strings; `out` must
// be a valid pointer.
enum FinslerStatus finsler_fixture_new(const char *name,
                                       size_t dim,
                                       const char *params,
                                       struct FinslerFixture **out);

// Releases a fixture. Null is ignored.
//
// # Safety
// `fx` must come from [`finsler_fixture_new`] and not be freed twice.
void finsler_fixture_free(struct FinslerFixture *fx);

// Dimension of the fixture, or 0 for a null handle.
//
// # Safety
// `fx` must be null or a live handle.
size_t finsler_fixture_dim(const struct FinslerFixture *fx);

// `L(x, y)`. `x` and `y` hold `n` values each.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum FinslerStatus finsler_eval(const struct FinslerFixture *fx,
                                const double *x,
                                const double *y,
                                size_t n,
                                double *out);

// Fundamental tensor `g_ij`, written row-major into `out[n * n]`.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum FinslerStatus finsler_fundamental_tensor(const struct FinslerFixture *fx,
                                              const double *x,
                                              const double *y,
                                              size_t n,
                                              double *out);

// Spray coefficients `G^i`, written into `out[n]`.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum FinslerStatus finsler_spray(const struct FinslerFixture *fx,
                                 const double *x,
                                 const double *y,
                                 size_t n,
                                 double *out);

// Scalar curvature `r` fitted at a point, with the relative fit residual
// and whether the deviation tensor vanished there (then `r = 0`).
// `residual` and `flat` may be null.
//
// # Safety
// Pointers must be valid for the stated lengths.
enum FinslerStatus finsler_scalar_curvature(const struct FinslerFixture *fx,
                                            const double *x,
                                            const double *y,
                                            size_t n,
                                            double *r,
                                            double *residual,
                                            bool *flat);

// Default settings: 30 samples, seed 1, tolerances 1e-6 and 1e-7.
struct FinslerRunConfig finsler_run_config_default(void);

// Classification report as JSON. `cfg` may be null for the defaults.
//
// # Safety
// `fx` must be a live handle; `out` must be valid. Free the string with
// [`finsler_string_free`].
enum FinslerStatus finsler_classify_json(const struct FinslerFixture *fx,
                                         const struct FinslerRunConfig *cfg,
                                         char **out);

// Classification plus the full identity suite as JSON.
//
// # Safety
// As for [`finsler_classify_json`].
enum FinslerStatus finsler_verify_json(const struct FinslerFixture *fx,
                                       const struct FinslerRunConfig *cfg,
                                       char **out);

// The Landsberg/scalar-curvature rigidity pipeline as JSON. Fails with
// `INVALID_ARGUMENT` below dimension 3.
//
// # Safety
// As for [`finsler_classify_json`].
enum FinslerStatus finsler_numata_json(const struct FinslerFixture *fx,
                                       const struct FinslerRunConfig *cfg,
                                       char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void finsler_string_free(char *s);

// Message of the last failed call on this thread, or null. Valid until the
// next call into the library on the same thread.
const char *finsler_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINSLER_H */
