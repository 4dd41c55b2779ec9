#ifndef MODULI_SYS_H
#define MODULI_SYS_H

#pragma once

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_UTF8 = 2,
  MS_STATUS_PARSE = 3,
  MS_STATUS_NOT_PRIME = 4,
  MS_STATUS_SHAPE_MISMATCH = 5,
  MS_STATUS_FIELD_MISMATCH = 6,
  MS_STATUS_DIMENSION_MISMATCH = 7,
  MS_STATUS_INDEX_OUT_OF_RANGE = 8,
  MS_STATUS_INVALID_MULTI_INDEX = 9,
  MS_STATUS_SINGULAR_BASE_CHANGE = 10,
  MS_STATUS_NOT_CONTROLLABLE = 11,
  MS_STATUS_RANK_DEFICIENT = 12,
  MS_STATUS_NOT_IN_LOCUS = 13,
  MS_STATUS_NONZERO_THETA_ALPHA = 14,
  MS_STATUS_ORACLE_TOO_LARGE = 15,
  MS_STATUS_CENSUS_TOO_LARGE = 16,
  MS_STATUS_INSUFFICIENT_DATA = 17,
  MS_STATUS_NOT_STABILIZED = 18,
  MS_STATUS_INCONSISTENT_DATA = 19,
  MS_STATUS_IO = 20,
  MS_STATUS_INTERNAL = 99,
} MsStatus;

/**
 * Opaque Markov parameter sequence.
 */
typedef struct MsMarkov MsMarkov;

/**
 * Opaque linear system `(A, B, C)`.
 */
typedef struct MsSystem MsSystem;

/**
 * Classification of a system, see [`ms_system_classify`].
 */
typedef struct MsSystemClass {
  bool cc;
  bool co;
  bool canonical;
  size_t rank_c;
  size_t rank_o;
} MsSystemClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next call.
 */
const char *ms_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ms_string_free(char *s);

/**
 * Parses a system from JSON.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum MsStatus ms_system_from_json(const char *json, struct MsSystem **out);

/**
 * Releases a system handle. Null is ignored.
 *
 * # Safety
 * `sys` must come from this library and not have been freed.
 */
void ms_system_free(struct MsSystem *sys);

/**
 * Serializes a system to JSON.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_system_to_json(const struct MsSystem *sys, char **out);

/**
 * Writes `(m, n, p)`.
 *
 * # Safety
 * `sys` must be a live handle; the output pointers must be valid.
 */
enum MsStatus ms_system_dims(const struct MsSystem *sys, size_t *m, size_t *n, size_t *p);

/**
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_system_classify(const struct MsSystem *sys, struct MsSystemClass *out);

/**
 * Whether the associated quiver representation is simple.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_system_is_simple(const struct MsSystem *sys, bool *out);

/**
 * Stability with respect to the weight `(theta1, theta2)`, which must vanish on `(1, n)`.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_system_is_theta_stable(const struct MsSystem *sys,
                                        int64_t theta1,
                                        int64_t theta2,
                                        bool *out);

/**
 * Kalman canonical form as a new handle; the base change `g` goes to `g_json` unless null.
 *
 * # Safety
 * `sys` must be a live handle, `out` a valid pointer, `g_json` valid or null.
 */
enum MsStatus ms_canonical_form(const struct MsSystem *sys, struct MsSystem **out, char **g_json);

/**
 * Kalman code as JSON `{"m", "n", "j", "p"}` with 1-based columns.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_kalman_code_json(const struct MsSystem *sys, char **out);

/**
 * Grassmannian embeddings as JSON `{"psi", "gamma", "locus", "stratum"}`.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_embed_json(const struct MsSystem *sys, char **out);

/**
 * Closed-form number of controllable (`observable == false`) or observable systems up
 * to base change over `F_q`, as a decimal string.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MsStatus ms_count_formula(bool observable,
                               size_t m,
                               size_t n,
                               size_t p,
                               uint64_t q,
                               char **out);

/**
 * Census by enumeration, as a JSON report. `bound` caps the enumeration (0 = default).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MsStatus ms_census_json(bool observable,
                             size_t m,
                             size_t n,
                             size_t p,
                             uint64_t q,
                             uint64_t bound,
                             char **out);

/**
 * Parses a Markov sequence from JSON.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum MsStatus ms_markov_from_json(const char *json, struct MsMarkov **out);

/**
 * Releases a Markov handle. Null is ignored.
 *
 * # Safety
 * `seq` must come from this library and not have been freed.
 */
void ms_markov_free(struct MsMarkov *seq);

/**
 * Realizes a canonical system reproducing the sequence.
 *
 * # Safety
 * `seq` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_realize(const struct MsMarkov *seq, struct MsSystem **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODULI_SYS_H */
