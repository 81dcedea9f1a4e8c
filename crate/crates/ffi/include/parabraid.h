#ifndef PARABRAID_H
#define PARABRAID_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by all functions.
typedef enum PbStatus {
  PB_STATUS_OK = 0,
  PB_STATUS_INVALID_ARGUMENT = 1,
  PB_STATUS_NULL_POINTER = 2,
  PB_STATUS_SIZE_BOUND = 3,
  PB_STATUS_CHECK_FAILED = 4,
  PB_STATUS_LIMIT_EXCEEDED = 5,
  PB_STATUS_BUFFER_TOO_SMALL = 6,
  PB_STATUS_INTERNAL = 7,
} PbStatus;

// Opaque braid-group representation on `n_pairs` qudits.
typedef struct PbRepresentation PbRepresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *pb_version(void);

// Message of the last failed call on this thread (empty after a success).
// Valid until the next call into the library on the same thread.
const char *pb_last_error_message(void);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void pb_string_free(char *s);

// Build the quadratic-phase representation `(d, r, sign)` on `n_pairs`
// qudits (`2·n_pairs` parafermions). `sign` is `1` or `-1`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum PbStatus pb_representation_new(size_t d,
                                    size_t n_pairs,
                                    int64_t r,
                                    int sign,
                                    struct PbRepresentation **out);

// # Safety
// `rep` must be null or a handle from [`pb_representation_new`] not yet freed.
void pb_representation_free(struct PbRepresentation *rep);

// Hilbert-space dimension `d^{n_pairs}`, or 0 for a null handle.
//
// # Safety
// `rep` must be null or a live handle.
size_t pb_representation_dim(const struct PbRepresentation *rep);

// Operator of a braid word (time-ordered, e.g. `"1 2 -1"`, or a shortcut
// such as `"F"`, `"S^-1"`), written row-major into `re` and `im`, each of
// length `len ≥ dim²`.
//
// # Safety
// `rep` must be a live handle, `word` a NUL-terminated string, and `re`,
// `im` must point to `len` writable doubles.
enum PbStatus pb_representation_compose(const struct PbRepresentation *rep,
                                        const char *word,
                                        double *re,
                                        double *im,
                                        size_t len);

// Largest residual of the representation checks (unitarity, locality,
// braid relations, parity conservation) into `max_residual`.
//
// # Safety
// `rep` must be a live handle and `max_residual` writable.
enum PbStatus pb_representation_check(const struct PbRepresentation *rep, double *max_residual);

// Coefficients `c_0 … c_{d−1}` of the quadratic-phase solution into `re`, `im`
// (each of length `len ≥ d`).
//
// # Safety
// `re` and `im` must point to `len` writable doubles.
enum PbStatus pb_fzc_coefficients(size_t d,
                                  int64_t r,
                                  int sign,
                                  double *re,
                                  double *im,
                                  size_t len);

// Gate identification report (JSON) for `braid` in the representation
// `(d, r, sign)`. Leakage out of the code space gives `CheckFailed`.
//
// # Safety
// `braid` must be a NUL-terminated string and `out_json` writable; the
// returned string must be freed with [`pb_string_free`].
enum PbStatus pb_identify_gate_json(size_t d,
                                    int64_t r,
                                    int sign,
                                    const char *braid,
                                    char **out_json);

// Solver run (JSON: clusters with representatives and classification).
//
// # Safety
// `out_json` must be writable; free the result with [`pb_string_free`].
enum PbStatus pb_solve_json(size_t d, size_t restarts, uint64_t seed, char **out_json);

// Order of the group generated by the braid-derived (`generators = 0`) or
// reference (`generators = 1`) Clifford generators on `n` logical qudits.
// With `track_phases = 0` image phases are ignored (order modulo Paulis).
//
// # Safety
// `order` must be writable.
enum PbStatus pb_clifford_order(size_t d,
                                size_t n,
                                int generators,
                                int track_phases,
                                size_t limit,
                                uint64_t *order);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARABRAID_H */
