#ifndef FNX_H
#define FNX_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result codes shared by every entry point.
typedef enum FnxStatus {
  FNX_STATUS_OK = 0,
  FNX_STATUS_NULL_POINTER = 1,
  // Malformed JSON, bad UTF-8 or an ill-formed system.
  FNX_STATUS_INVALID_INPUT = 2,
  // Parameters outside the range a formula or method supports.
  FNX_STATUS_OUT_OF_RANGE = 3,
  // Singular or degenerate data (no invertible block, non-generic forms, ...).
  FNX_STATUS_DEGENERATE = 4,
  // A mathematical check failed.
  FNX_STATUS_CHECK_FAILED = 5,
  // Numeric methods could not settle the answer.
  FNX_STATUS_INCONCLUSIVE = 6,
  // A panic was caught at the boundary.
  FNX_STATUS_INTERNAL = 7,
} FnxStatus;

// Opaque fewnomial system.
typedef struct FnxSystem FnxSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. Valid until the next failing call.
const char *fnx_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *fnx_version(void);

// Frees a string returned through an `out` parameter. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void fnx_string_free(char *s);

// Parses a system from JSON `{"n": .., "support": [[..]], "coeffs": [[..]]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum FnxStatus fnx_system_from_json(const char *json, struct FnxSystem **out);

// Releases a system handle. NULL is ignored.
//
// # Safety
// `sys` must come from `fnx_system_from_json` and not have been freed.
void fnx_system_free(struct FnxSystem *sys);

// Number of variables n and k = |W| − n − 1.
//
// # Safety
// `sys` must be a live handle; `n` and `k` must be writable.
enum FnxStatus fnx_system_dims(const struct FnxSystem *sys, size_t *n, size_t *k);

// Exact number of positive solutions (n ≤ 2).
//
// # Safety
// `sys` must be a live handle; `count` must be writable.
enum FnxStatus fnx_count_positive(const struct FnxSystem *sys, size_t *count);

// Counts both sides of the Gale bijection. Returns `CheckFailed` when they disagree,
// after still filling the two counts.
//
// # Safety
// `sys` must be a live handle; the out pointers must be writable.
enum FnxStatus fnx_verify_bijection(const struct FnxSystem *sys,
                                    uint64_t seed,
                                    size_t *original,
                                    size_t *gale);

// Gale dual as JSON {"A", "B", "perm", "nW"}; free with `fnx_string_free`.
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum FnxStatus fnx_gale_dual_json(const struct FnxSystem *sys, char **out);

// The new fewnomial bound for (n, k): its value and the largest count it allows.
//
// # Safety
// `value` and `cap` must be writable.
enum FnxStatus fnx_new_bound(uint64_t n, uint64_t k, double *value, uint64_t *cap);

// Every bound formula at (n, k) as a JSON array; free with `fnx_string_free`.
//
// # Safety
// `out` must be writable.
enum FnxStatus fnx_bounds_json(uint64_t n, uint64_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FNX_H */
