#ifndef TORIC_OKOUNKOV_H
#define TORIC_OKOUNKOV_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OkbStatus {
  OKB_STATUS_OK = 0,
  OKB_STATUS_INTERNAL = 1,
  OKB_STATUS_VALIDATION = 2,
  OKB_STATUS_MATHEMATICAL = 3,
  OKB_STATUS_NULL_ARGUMENT = 4,
  OKB_STATUS_INVALID_UTF8 = 5,
} OkbStatus;

/**
 * Opaque torus-invariant divisor on a fan.
 */
typedef struct OkbDivisor OkbDivisor;

/**
 * Opaque validated fan.
 */
typedef struct OkbFan OkbFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Owned by the
 * library and valid until the next call on this thread.
 */
const char *okb_last_error(void);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void okb_string_free(char *s);

/**
 * Runs a named job (`"delta"`, `"flag-s"`, ...) on JSON input and writes
 * the JSON report to `*out`. The report is written for failed jobs too.
 *
 * # Safety
 * `command` and `input` are NUL-terminated strings; `out` is writable.
 */
enum OkbStatus okb_run_json(const char *command, const char *input, uint32_t precision, char **out);

/**
 * Builds a fan from a JSON fan description: a corpus name such as
 * `"\"P2\""` or `{"rank":..,"rays":..,"cones":..}`.
 *
 * # Safety
 * `json` is a NUL-terminated string; `out` is writable.
 */
enum OkbStatus okb_fan_from_json(const char *json, struct OkbFan **out);

/**
 * # Safety
 * `fan` is null or a live handle from [`okb_fan_from_json`].
 */
void okb_fan_free(struct OkbFan *fan);

/**
 * # Safety
 * `fan` is a live handle.
 */
size_t okb_fan_rank(const struct OkbFan *fan);

/**
 * # Safety
 * `fan` is a live handle.
 */
size_t okb_fan_ray_count(const struct OkbFan *fan);

/**
 * Divisor with one rational coefficient (`"p/q"`) per ray.
 *
 * # Safety
 * `fan` is a live handle; `coefficients` points to `len` strings.
 */
enum OkbStatus okb_divisor_new(const struct OkbFan *fan,
                               const char *const *coefficients,
                               size_t len,
                               struct OkbDivisor **out);

/**
 * # Safety
 * `d` is null or a live handle from [`okb_divisor_new`].
 */
void okb_divisor_free(struct OkbDivisor *d);

/**
 * Volume of the moment polytope as `"p/q"`.
 *
 * # Safety
 * `d` is a live handle; `out` is writable.
 */
enum OkbStatus okb_divisor_volume(const struct OkbDivisor *d, char **out);

/**
 * S- and T-invariants along the primitive vector `v` of length `len`.
 *
 * # Safety
 * `d` is a live handle; `v` points to `len` integers; outputs are writable.
 */
enum OkbStatus okb_divisor_s_t(const struct OkbDivisor *d,
                               const int64_t *v,
                               size_t len,
                               char **out_s,
                               char **out_t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORIC_OKOUNKOV_H */
