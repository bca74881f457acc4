#ifndef BH_H
#define BH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum BhStatus {
  BH_STATUS_OK = 0,
  BH_STATUS_NULL_POINTER = 1,
  BH_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or data that does not describe a valid cover or graph.
  BH_STATUS_INVALID_INPUT = 3,
  // The operation does not apply to this cover.
  BH_STATUS_NOT_APPLICABLE = 4,
  // The orbit search exceeded its class limit.
  BH_STATUS_LIMIT_EXCEEDED = 5,
  BH_STATUS_INTERNAL = 6,
} BhStatus;

// Birman–Hilden status reported by [`bh_verdict`].
typedef enum BhVerdictStatus {
  BH_VERDICT_STATUS_HOLDS = 0,
  BH_VERDICT_STATUS_FAILS = 10,
  BH_VERDICT_STATUS_INCONCLUSIVE = 20,
} BhVerdictStatus;

// Opaque handle to a validated cover.
typedef struct BhCover BhCover;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates a cover file. On success `*out` holds a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum BhStatus bh_cover_from_json(const char *json, struct BhCover **out);

// Builds the cover of the twice-branched torus attached to a graph file.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum BhStatus bh_cover_from_graph_json(const char *json, struct BhCover **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `cover` must come from this library and must not be used afterwards.
void bh_cover_free(struct BhCover *cover);

// Number of sheets, or 0 for a null handle.
//
// # Safety
// `cover` must be null or a live handle.
uintptr_t bh_cover_degree(const struct BhCover *cover);

// Euler characteristic and genus of the total space.
//
// # Safety
// `cover` must be a live handle; the out pointers must be valid.
enum BhStatus bh_cover_total_space(const struct BhCover *cover, int64_t *euler, int64_t *genus);

// The cover in its JSON file format.
//
// # Safety
// `cover` must be a live handle and `out` a valid pointer.
enum BhStatus bh_cover_to_json(const struct BhCover *cover, char **out);

// Full analysis report as JSON. The digest covers the cover JSON as re-serialized here.
//
// # Safety
// `cover` must be a live handle and `out` a valid pointer.
enum BhStatus bh_analyze(const struct BhCover *cover, uintptr_t limit, char **out);

// Birman–Hilden verdict. `*status` receives the outcome and `*out` the verdict JSON.
//
// # Safety
// `cover` must be a live handle; the out pointers must be valid.
enum BhStatus bh_verdict(const struct BhCover *cover,
                         uintptr_t limit,
                         enum BhVerdictStatus *status,
                         char **out);

// Weak curve lifting decision for a genus-0 base. `*holds` is 1 or 0.
//
// # Safety
// `cover` must be a live handle; the out pointers must be valid.
enum BhStatus bh_wcl(const struct BhCover *cover, uintptr_t limit, int32_t *holds, char **out);

// Message of the last failure on this thread, or null. Free with [`bh_string_free`].
char *bh_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and must not be used afterwards.
void bh_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BH_H */
