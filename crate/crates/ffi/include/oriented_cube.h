/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef ORIENTED_CUBE_H
#define ORIENTED_CUBE_H

#include <stdbool.h>
#include <stdint.h>
#include <stddef.h>

typedef enum OcStatus {
  OC_STATUS_OK = 0,
  // The computation ran and a check did not hold.
  OC_STATUS_CHECK_FAILED = 1,
  OC_STATUS_INVALID_ARGUMENT = 2,
  OC_STATUS_NULL_POINTER = 3,
  OC_STATUS_INTERNAL = 4,
} OcStatus;

// A certification run: the report and its certificates.
typedef struct OcReport OcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into the library from the same thread.
const char *oc_last_error_message(void);

// Number of rectangles of `C^n`, `1 ≤ n ≤ 16`.
//
// # Safety
// `out` must be valid for a write.
enum OcStatus oc_rectangle_count(uint32_t n, uint64_t *out);

// Whether every 3- and 4-class numerical rectangle of `h` is realized.
//
// # Safety
// `weights` must point to `len` readable values and `out` must be valid
// for a write.
enum OcStatus oc_is_primitive(const uint32_t *weights, uintptr_t len, bool *out);

// Certifies every hyperplane orbit of `C^n` (`1 ≤ n ≤ 7`) with the default
// enumeration. `jobs = 0` uses one worker per core. An unconfirmed verdict
// is still `Ok`; ask [`oc_report_confirmed`].
//
// # Safety
// `out` must be valid for a write.
enum OcStatus oc_certify(uint32_t n, uint32_t jobs, struct OcReport **out);

// # Safety
// `report` must come from [`oc_certify`] and `out` must be valid for a write.
enum OcStatus oc_report_confirmed(const struct OcReport *report, bool *out);

// Number of orbits in the report.
//
// # Safety
// `report` must come from [`oc_certify`] and `out` must be valid for a write.
enum OcStatus oc_report_orbit_count(const struct OcReport *report, uintptr_t *out);

// The report as a canonical JSON envelope. Free with [`oc_string_free`].
//
// # Safety
// `report` must come from [`oc_certify`] and `out` must be valid for a write.
enum OcStatus oc_report_to_json(const struct OcReport *report, char **out);

// Writes the report and its certificates under `dir` and returns the
// report path. Free the path with [`oc_string_free`].
//
// # Safety
// `report` must come from [`oc_certify`], `dir` must be a NUL-terminated
// string and `out_path` must be valid for a write.
enum OcStatus oc_report_write_store(const struct OcReport *report,
                                    const char *dir,
                                    char **out_path);

// Replays a stored report and every certificate it names. `*ok` is false
// when anything fails to replay; the problems are in the last error
// message.
//
// # Safety
// `report_path` must be a NUL-terminated string and `ok` valid for a write.
enum OcStatus oc_verify_store(const char *report_path, bool *ok);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void oc_string_free(char *s);

// # Safety
// `report` must be null or come from [`oc_certify`], freed once.
void oc_report_free(struct OcReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORIENTED_CUBE_H */
