#ifndef DYADIC_SPARSE_H
#define DYADIC_SPARSE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum DsStatus {
  DS_STATUS_OK = 0,
  DS_STATUS_NULL_POINTER = 1,
  DS_STATUS_PARAMETER = 2,
  DS_STATUS_ALIGNMENT = 3,
  DS_STATUS_RESOLUTION = 4,
  DS_STATUS_COVERAGE = 5,
  DS_STATUS_NON_CONVERGENCE = 6,
  DS_STATUS_CONSTRUCTION = 7,
  DS_STATUS_BUDGET = 8,
  DS_STATUS_FORMAT = 9,
  DS_STATUS_IO = 10,
  DS_STATUS_BUFFER_TOO_SMALL = 11,
  DS_STATUS_PANIC = 12,
} DsStatus;

/**
 * Output format of [`ds_run_experiment`].
 */
typedef enum DsFormat {
  DS_FORMAT_CSV = 0,
  DS_FORMAT_JSON = 1,
} DsFormat;

/**
 * Opaque sampled function on a uniform grid.
 */
typedef struct DsGridFunction DsGridFunction;

/**
 * Opaque sparse family.
 */
typedef struct DsSparseFamily DsSparseFamily;

/**
 * Opaque weight.
 */
typedef struct DsWeight DsWeight;

/**
 * A cube of a sparse family.
 */
typedef struct DsCube {
  /**
   * Shifted grid, one base-3 digit per axis.
   */
  uint8_t grid;
  uint32_t level;
  int64_t index[2];
  /**
   * `|E_Q| / |Q|` for the witness set of the cube.
   */
  double witness_fraction;
} DsCube;

/**
 * Norms of the power-weight lower-bound example.
 */
typedef struct DsSharpness {
  double f_norm_pow;
  double f_norm;
  double ta_norm;
  double ratio;
  double unresolved;
} DsSharpness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call into this library on the
 * same thread.
 */
const char *ds_last_error_message(void);

/**
 * Creates a function with `len = 2^(dim*depth)` cell values, row-major, on
 * the box with corner `lower[0..dim]` and side `side`.
 *
 * # Safety
 * `lower` must point to `dim` doubles, `values` to `len` doubles and `out`
 * must be writable.
 */
enum DsStatus ds_function_new(uintptr_t dim,
                              const double *lower,
                              double side,
                              uint32_t depth,
                              const double *values,
                              uintptr_t len,
                              struct DsGridFunction **out);

/**
 * # Safety
 * `f` must be null or a handle from this library not yet freed.
 */
void ds_function_free(struct DsGridFunction *f);

/**
 * Number of cells, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uintptr_t ds_function_len(const struct DsGridFunction *f);

/**
 * Copies the cell values into `buf`, which must hold at least
 * [`ds_function_len`] doubles.
 *
 * # Safety
 * `f` must be a live handle and `buf` must point to `cap` writable doubles.
 */
enum DsStatus ds_function_values(const struct DsGridFunction *f, double *buf, uintptr_t cap);

/**
 * Hardy-Littlewood maximal function over the shifted dyadic grids.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum DsStatus ds_hl_maximal(const struct DsGridFunction *f, struct DsGridFunction **out);

/**
 * `L(log L)^beta` maximal function.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum DsStatus ds_orlicz_maximal(const struct DsGridFunction *f,
                                double beta,
                                struct DsGridFunction **out);

/**
 * Luxemburg `L(log L)^beta` average of `f` over a dyadic cube.
 *
 * # Safety
 * `f` must be a live handle, `index` must point to as many values as the
 * function has axes and `out` must be writable.
 */
enum DsStatus ds_luxemburg_norm(const struct DsGridFunction *f,
                                uint8_t grid,
                                uint32_t level,
                                const int64_t *index,
                                double beta,
                                double *out);

/**
 * `T_A f` (principal value) or, when `maximal` is true, the maximal
 * truncation `T_A^* f`, for the named kernel and amplitude presets.
 *
 * # Safety
 * `f` must be a live handle, the strings NUL-terminated and `out` writable.
 */
enum DsStatus ds_commutator(const struct DsGridFunction *f,
                            const char *omega,
                            const char *amplitude,
                            bool maximal,
                            struct DsGridFunction **out);

/**
 * Power weight `|x - center|^exponent` on the given grid.
 *
 * # Safety
 * `lower` and `center` must point to `dim` doubles and `out` be writable.
 */
enum DsStatus ds_weight_power(uintptr_t dim,
                              const double *lower,
                              double side,
                              uint32_t depth,
                              const double *center,
                              double exponent,
                              struct DsWeight **out);

/**
 * Weight given by its cell values.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum DsStatus ds_weight_sampled(const struct DsGridFunction *f, struct DsWeight **out);

/**
 * # Safety
 * `w` must be null or a handle from this library not yet freed.
 */
void ds_weight_free(struct DsWeight *w);

/**
 * Weight characteristics over all shifted dyadic cubes of the grid:
 * `[w]_{A_p}`.
 *
 * # Safety
 * `w` must be a live handle and `out` writable.
 */
enum DsStatus ds_ap_constant(const struct DsWeight *w, double p, double *out);

/**
 * Fujii-Wilson `[w]_{A_inf}`.
 *
 * # Safety
 * `w` must be a live handle and `out` writable.
 */
enum DsStatus ds_ainf_constant(const struct DsWeight *w, double *out);

/**
 * `[w]_{A_1}`.
 *
 * # Safety
 * `w` must be a live handle and `out` writable.
 */
enum DsStatus ds_a1_constant(const struct DsWeight *w, double *out);

/**
 * Sparse family dominating the commutator on `functions[0..count]`, built
 * from the whole box. `c2_initial <= 0` selects the default threshold.
 *
 * # Safety
 * `functions` must point to `count` live handles sharing one grid, the
 * strings must be NUL-terminated and `out` writable.
 */
enum DsStatus ds_sparse_build(const struct DsGridFunction *const *functions,
                              uintptr_t count,
                              const char *omega,
                              const char *amplitude,
                              double q,
                              double beta,
                              double c2_initial,
                              struct DsSparseFamily **out);

/**
 * # Safety
 * `family` must be null or a handle from this library not yet freed.
 */
void ds_sparse_free(struct DsSparseFamily *family);

/**
 * Number of cubes, or 0 for a null handle.
 *
 * # Safety
 * `family` must be null or a live handle.
 */
uintptr_t ds_sparse_len(const struct DsSparseFamily *family);

/**
 * The `i`-th cube in level-major order.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum DsStatus ds_sparse_cube(const struct DsSparseFamily *family, uintptr_t i, struct DsCube *out);

/**
 * Sparse Orlicz operator `sum_Q ||f||_{L(log L)^beta, 3Q} chi_Q`.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum DsStatus ds_sparse_apply(const struct DsSparseFamily *family,
                              const struct DsGridFunction *f,
                              double beta,
                              struct DsGridFunction **out);

/**
 * Norms of the power-weight example `f = x^(delta-1) chi_(0,1)` on a
 * logarithmic grid of the given depth.
 *
 * # Safety
 * `out` must be writable.
 */
enum DsStatus ds_sharpness_norms(double p,
                                 double delta,
                                 uint32_t depth,
                                 double unresolved_tol,
                                 struct DsSharpness *out);

/**
 * Runs a named experiment. `config_json` is a JSON object whose absent
 * fields take their defaults (null means all defaults). The table is
 * returned in `*out` and must be released with [`ds_string_free`].
 *
 * # Safety
 * `command` must be NUL-terminated, `config_json` null or NUL-terminated
 * and `out` writable.
 */
enum DsStatus ds_run_experiment(const char *command,
                                const char *config_json,
                                enum DsFormat format,
                                char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void ds_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DYADIC_SPARSE_H */
