/* C interface to the geodesic-orbit analysis library. */

#ifndef WALLACH_H
#define WALLACH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every C-ABI call.
typedef enum GwStatus {
  // The call succeeded; out-pointers are filled.
  GW_STATUS_OK = 0,
  // A required pointer argument was NULL.
  GW_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  GW_STATUS_INVALID_UTF8 = 2,
  // The input parsed but was rejected (unknown space, malformed metric
  // or vector, zero vector, dimension mismatch, ...).
  GW_STATUS_INVALID_ARGUMENT = 3,
  // The computation itself refused the request (e.g. an operation that
  // is undefined for this space).
  GW_STATUS_MATH_ERROR = 4,
  // A panic was caught at the boundary; this is a bug in the library.
  GW_STATUS_INTERNAL_PANIC = 5,
} GwStatus;

// Opaque handle to a homogeneous-space description.
typedef struct GwSpace GwSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The default seed used by the seeded entry points when reproducing
// published reports.
uint64_t gw_default_seed(void);

// Returns a pointer to a NUL-terminated description of the last failure on
// this thread (empty if none). The pointer stays valid until the next
// failing call on the same thread; do not free it.
const char *gw_last_error(void);

// Release a string returned by any `out_json` parameter.
//
// # Safety
// `s` must be NULL or a pointer previously returned through an `out_json`
// parameter of this library, not yet freed.
void gw_string_free(char *s);

// The catalog of built-in space families, as a JSON array.
//
// # Safety
// `out_json` must be valid for a write of one pointer.
enum GwStatus gw_catalog_json(char **out_json);

// Create a space from a catalog spec such as `"su2_trivial"`,
// `"stiefel_n:4"`, or `"so_klm:2,2,1"`.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` must be valid for a write
// of one pointer.
enum GwStatus gw_space_new(const char *spec, struct GwSpace **out);

// Create a space from a JSON description (the `description` object
// produced by `gw_space_describe`). The loaded space is verified.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for a write
// of one pointer.
enum GwStatus gw_space_from_json(const char *json, struct GwSpace **out);

// Release a space handle.
//
// # Safety
// `space` must be NULL or a handle from `gw_space_new`/
// `gw_space_from_json`, not yet freed.
void gw_space_free(struct GwSpace *space);

// The full JSON description of the space (basis labels, structure
// constants, module partition); feed it back to `gw_space_from_json`.
//
// # Safety
// `space` must be a live handle; `out_json` valid for a write of one
// pointer.
enum GwStatus gw_space_describe(const struct GwSpace *space, char **out_json);

// Verify the defining properties of the space (bracket closure, module
// orthogonality, pairwise brackets landing in the isotropy subalgebra,
// ...); the JSON report lists each check with its outcome.
//
// # Safety
// `space` must be a live handle; `out_json` valid for a write of one
// pointer.
enum GwStatus gw_space_check(const struct GwSpace *space, char **out_json);

// The six interaction symbols of the module decomposition as JSON.
//
// # Safety
// `space` must be a live handle; `out_json` valid for a write of one
// pointer.
enum GwStatus gw_triple_symbols(const struct GwSpace *space, char **out_json);

// Decide exactly whether `vector` is a geodesic vector for `metric`.
// `out_is_geodesic` receives the verdict; `out_json` (optional, may be
// NULL) receives the residual report.
//
// # Safety
// `space` must be a live handle; `metric` and `vector` NUL-terminated
// strings; `out_is_geodesic` valid for a write of one byte; `out_json`
// NULL or valid for a write of one pointer.
enum GwStatus gw_geodesic_check(const struct GwSpace *space,
                                const char *metric,
                                const char *vector,
                                bool *out_is_geodesic,
                                char **out_json);

// Solve for an isotropy completion of the tangent vector `vector` (its
// components on the isotropy part are ignored): does some `x_k` make
// `x_k + x_m` geodesic? `out_exists` receives the answer; `out_json`
// (optional, may be NULL) receives the ranks and the completion found.
//
// # Safety
// Same contract as `gw_geodesic_check`, with `out_exists` in place of
// `out_is_geodesic`.
enum GwStatus gw_geodesic_complete(const struct GwSpace *space,
                                   const char *metric,
                                   const char *vector,
                                   bool *out_exists,
                                   char **out_json);

// Enumerate the exact solution families of the geodesic equations (only
// spaces with a built-in enumeration support this).
//
// # Safety
// `space` must be a live handle; `metric` a NUL-terminated string;
// `out_json` valid for a write of one pointer.
enum GwStatus gw_enumerate(const struct GwSpace *space, const char *metric, char **out_json);

// Probe whether the space is geodesic-orbit for every invariant metric or
// only for the standard one, over the default metric grid plus seeded
// random metrics and probes.
//
// # Safety
// `space` must be a live handle; `out_json` valid for a write of one
// pointer.
enum GwStatus gw_classify(const struct GwSpace *space, uint64_t seed, char **out_json);

// Multistart Newton search for geodesic vectors in float coordinates;
// solutions are deduplicated, canonicalized, and (where an enumeration
// exists) matched to their nearest family.
//
// # Safety
// `space` must be a live handle; `metric` a NUL-terminated string;
// `out_json` valid for a write of one pointer.
enum GwStatus gw_sample(const struct GwSpace *space,
                        const char *metric,
                        uint64_t seed,
                        uint32_t starts,
                        char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WALLACH_H */
