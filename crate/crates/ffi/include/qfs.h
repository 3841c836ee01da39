#ifndef QFS_H
#define QFS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QfsStatus {
  QFS_STATUS_OK = 0,
  QFS_STATUS_NULL_POINTER = 1,
  QFS_STATUS_INVALID_UTF8 = 2,
  // Malformed configuration or coordinates.
  QFS_STATUS_INPUT_ERROR = 3,
  // Numerical failure, such as a non-loxodromic element.
  QFS_STATUS_NUMERIC_ERROR = 4,
  // Coordinates too close to a branch cut.
  QFS_STATUS_BRANCH_FAILURE = 5,
  QFS_STATUS_INDEX_OUT_OF_RANGE = 6,
  QFS_STATUS_BUFFER_TOO_SMALL = 7,
  QFS_STATUS_PANIC = 8,
} QfsStatus;

// Opaque surface handle.
typedef struct QfsSurface QfsSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`) and returns the full message length in bytes.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
uintptr_t qfs_last_error(char *buf, uintptr_t len);

// Parses a JSON configuration and builds its holonomy. On success `*out`
// owns a new handle to be released with [`qfs_surface_free`].
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum QfsStatus qfs_surface_from_json(const char *json, struct QfsSurface **out);

// # Safety
// `s` must be null or a handle from [`qfs_surface_from_json`] not yet freed.
void qfs_surface_free(struct QfsSurface *s);

// Number of decomposition curves `N = 3g − 3`.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
enum QfsStatus qfs_surface_num_curves(const struct QfsSurface *s, uintptr_t *out);

// Number of standard generators `2g`.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
enum QfsStatus qfs_surface_num_generators(const struct QfsSurface *s, uintptr_t *out);

// Replaces the Fenchel–Nielsen coordinates and rebuilds the holonomy.
// `l` and `tau` each hold `n` complex numbers. On failure the handle keeps
// its previous coordinates.
//
// # Safety
// `s` must be a live handle; `l` and `tau` must be valid for `2n` doubles.
enum QfsStatus qfs_surface_set_fn(struct QfsSurface *s,
                                  const double *l,
                                  const double *tau,
                                  uintptr_t n);

// Writes generator `index` as `a, b, c, d` (8 doubles).
//
// # Safety
// `s` must be a live handle and `out` valid for 8 doubles.
enum QfsStatus qfs_surface_generator(const struct QfsSurface *s, uintptr_t index, double *out);

// Distance of the relator image from the identity.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
enum QfsStatus qfs_surface_relator_residual(const struct QfsSurface *s, double *out);

// Complex lengths of the decomposition curves recovered from the
// holonomy (`N` complex numbers).
//
// # Safety
// `s` must be a live handle and `out` valid for `len` doubles.
enum QfsStatus qfs_surface_lengths(const struct QfsSurface *s, double *out, uintptr_t len);

// Antisymmetrized Gram matrix of the Goldman pairing in the basis
// `(∂/∂l₁ … ∂/∂l_N, ∂/∂τ₁ … ∂/∂τ_N)`, row-major, `(2N)²` complex
// entries. `h ≤ 0` selects the configured finite-difference step.
//
// # Safety
// `s` must be a live handle and `out` valid for `len` doubles.
enum QfsStatus qfs_surface_gram(const struct QfsSurface *s, double h, double *out, uintptr_t len);

// `‖Gram − J‖_max`, together with the least-squares scale `c` of `J`
// (written to `scale` as two doubles when non-null).
//
// # Safety
// `s` must be a live handle, `out` a valid pointer and `scale` null or
// valid for 2 doubles.
enum QfsStatus qfs_surface_darboux_residual(const struct QfsSurface *s,
                                            double h,
                                            double *out,
                                            double *scale);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFS_H */
