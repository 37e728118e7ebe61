#ifndef BILIN_H
#define BILIN_H

#include <stddef.h>
#include <stdint.h>

typedef enum BilinAlgorithm {
  BILIN_ALGORITHM_YXL = 0,
  BILIN_ALGORITHM_YMXL = 1,
  BILIN_ALGORITHM_YHXL_GAUSSIAN = 2,
  BILIN_ALGORITHM_YHXL_WIEDEMANN = 3,
  BILIN_ALGORITHM_F4 = 4,
  BILIN_ALGORITHM_EXHAUSTIVE = 5,
} BilinAlgorithm;

typedef enum BilinBackend {
  BILIN_BACKEND_GAUSSIAN = 0,
  BILIN_BACKEND_WIEDEMANN = 1,
} BilinBackend;

/**
 * Outcome stored in a report.
 */
typedef enum BilinSolveStatus {
  BILIN_SOLVE_STATUS_SOLUTION_FOUND = 0,
  BILIN_SOLVE_STATUS_NO_SOLUTION = 1,
  BILIN_SOLVE_STATUS_UNDETERMINED = 2,
} BilinSolveStatus;

/**
 * Return code of every fallible function.
 */
typedef enum BilinStatus {
  BILIN_STATUS_OK = 0,
  BILIN_STATUS_NULL_POINTER = 1,
  BILIN_STATUS_INVALID_PARAMS = 2,
  BILIN_STATUS_DIMENSION = 3,
  BILIN_STATUS_DOMAIN = 4,
  BILIN_STATUS_BUDGET = 5,
  BILIN_STATUS_MALFORMED = 6,
  BILIN_STATUS_BUFFER_TOO_SMALL = 7,
  BILIN_STATUS_NOT_AVAILABLE = 8,
  BILIN_STATUS_INTERNAL = 9,
} BilinStatus;

/**
 * Opaque solver report.
 */
typedef struct BilinReport BilinReport;

/**
 * Opaque bilinear sequence.
 */
typedef struct BilinSequence BilinSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *bilin_last_error(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from a `*_to_json` call and not be freed twice.
 */
void bilin_string_free(char *s);

/**
 * Parses an instance from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BilinStatus bilin_sequence_from_json(const char *json, struct BilinSequence **out);

/**
 * Samples a random instance; `planted != 0` plants a common zero and
 * `homogeneous != 0` drops the affine terms (ignored when planted).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BilinStatus bilin_sequence_random(uintptr_t nx,
                                       uintptr_t ny,
                                       uintptr_t m,
                                       uint32_t q,
                                       int32_t planted,
                                       int32_t homogeneous,
                                       uint64_t seed,
                                       struct BilinSequence **out);

/**
 * # Safety
 * `seq` must be null or a handle from this library, freed once.
 */
void bilin_sequence_free(struct BilinSequence *seq);

/**
 * Serializes to JSON; release the string with [`bilin_string_free`].
 *
 * # Safety
 * `seq` must be a valid handle and `out` a valid pointer.
 */
enum BilinStatus bilin_sequence_to_json(const struct BilinSequence *seq, char **out);

/**
 * # Safety
 * `seq` must be a valid handle; the output pointers must be valid.
 */
enum BilinStatus bilin_sequence_dims(const struct BilinSequence *seq,
                                     uintptr_t *nx,
                                     uintptr_t *ny,
                                     uintptr_t *m,
                                     uint32_t *q);

/**
 * Writes the `m` values `f_k(u, v)` to `out`.
 *
 * # Safety
 * `u`, `v` and `out` must point to arrays of the given lengths.
 */
enum BilinStatus bilin_sequence_evaluate(const struct BilinSequence *seq,
                                         const uint32_t *u,
                                         uintptr_t nu,
                                         const uint32_t *v,
                                         uintptr_t nv,
                                         uint32_t *out,
                                         uintptr_t nout);

/**
 * y-XL at degree `d`; `d = 0` selects the witness degree.
 *
 * # Safety
 * `seq` must be a valid handle and `out` a valid pointer.
 */
enum BilinStatus bilin_solve_yxl(const struct BilinSequence *seq,
                                 uint32_t d,
                                 struct BilinReport **out);

/**
 * y-MXL with degree bound `d_max`; `0` selects max(3, witness degree).
 *
 * # Safety
 * `seq` must be a valid handle and `out` a valid pointer.
 */
enum BilinStatus bilin_solve_ymxl(const struct BilinSequence *seq,
                                  uint32_t d_max,
                                  struct BilinReport **out);

/**
 * Hybrid solver guessing `a_x` x- and `a_y` y-variables.
 *
 * # Safety
 * `seq` must be a valid handle and `out` a valid pointer.
 */
enum BilinStatus bilin_solve_yhxl(const struct BilinSequence *seq,
                                  uintptr_t a_x,
                                  uintptr_t a_y,
                                  enum BilinBackend backend,
                                  uint64_t seed,
                                  struct BilinReport **out);

/**
 * Sets `*one_in_ideal` to 1 iff `1 ∈ J_{y,≤d}`.
 *
 * # Safety
 * `seq` must be a valid handle and `one_in_ideal` a valid pointer.
 */
enum BilinStatus bilin_witness_test(const struct BilinSequence *seq,
                                    uint32_t d,
                                    int32_t *one_in_ideal);

/**
 * # Safety
 * `report` must be null or a handle from this library, freed once.
 */
void bilin_report_free(struct BilinReport *report);

/**
 * # Safety
 * `report` must be a valid handle and `out` a valid pointer.
 */
enum BilinStatus bilin_report_status(const struct BilinReport *report, enum BilinSolveStatus *out);

/**
 * Copies the solution into `u` and `v`. Returns `NotAvailable` when the
 * report holds no solution.
 *
 * # Safety
 * `u` and `v` must point to arrays of the given lengths.
 */
enum BilinStatus bilin_report_solution(const struct BilinReport *report,
                                       uint32_t *u,
                                       uintptr_t nu,
                                       uint32_t *v,
                                       uintptr_t nv);

/**
 * Returns `NotAvailable` when no linear polynomial was found.
 *
 * # Safety
 * `report` must be a valid handle and `out` a valid pointer.
 */
enum BilinStatus bilin_report_solving_degree(const struct BilinReport *report, uint32_t *out);

/**
 * Serializes the full report; release with [`bilin_string_free`].
 *
 * # Safety
 * `report` must be a valid handle and `out` a valid pointer.
 */
enum BilinStatus bilin_report_to_json(const struct BilinReport *report, char **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum BilinStatus bilin_dreg(uintptr_t nx, uintptr_t ny, uintptr_t m, uint32_t *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum BilinStatus bilin_tff(uintptr_t nx, uintptr_t ny, uintptr_t m, uint32_t *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum BilinStatus bilin_twit(uintptr_t nx, uintptr_t ny, uintptr_t m, uint32_t *out);

/**
 * log2 of the estimated multiplication count.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum BilinStatus bilin_estimate(enum BilinAlgorithm alg,
                                uintptr_t nx,
                                uintptr_t ny,
                                uintptr_t m,
                                uint32_t q,
                                uintptr_t a_x,
                                uintptr_t a_y,
                                double omega,
                                double *out);

/**
 * Cheapest hybrid configuration and its log2 cost.
 *
 * # Safety
 * All output pointers must be valid.
 */
enum BilinStatus bilin_optimal_hybrid(uintptr_t nx,
                                      uintptr_t ny,
                                      uintptr_t m,
                                      uint32_t q,
                                      double omega,
                                      uintptr_t *a_x,
                                      uintptr_t *a_y,
                                      enum BilinBackend *backend,
                                      double *log2_cost);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BILIN_H */
