/* C interface to the conedec divisor-cone geometry engine. */

#pragma once

/* Generated with cbindgen:0.26.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; validation and refusal mirror the CLI exit codes.
typedef enum ConedecStatus {
  CONEDEC_STATUS_OK = 0,
  // Malformed input: bad JSON, bad rational, inconsistent declared data.
  CONEDEC_STATUS_VALIDATION = 2,
  // Well-formed input refused on mathematical grounds.
  CONEDEC_STATUS_MATH_REFUSAL = 3,
  // Unexpected internal failure.
  CONEDEC_STATUS_INTERNAL = 4,
  // A required pointer argument was null.
  CONEDEC_STATUS_NULL_ARGUMENT = 5,
} ConedecStatus;

// Opaque parsed document handle.
typedef struct ConedecDocument ConedecDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message for this thread, or null when no error occurred.
// The caller frees the returned string with `conedec_string_free`.
char *conedec_last_error_message(void);

// Frees a string allocated by this library. Null is ignored.
//
// # Safety
// `s` must be a pointer previously returned by a conedec function and not
// yet freed.
void conedec_string_free(char *s);

// Parses a JSON input document into an opaque handle.
//
// # Safety
// `json` must be a valid NUL-terminated string; `out` must be a valid
// pointer to receive the handle.
enum ConedecStatus conedec_document_parse(const char *json, struct ConedecDocument **out);

// Releases a document handle. Null is ignored.
//
// # Safety
// `doc` must come from `conedec_document_parse` and not be freed twice.
void conedec_document_free(struct ConedecDocument *doc);

// Zariski decomposition of a divisor expression (for example `"2C0+1C1"`).
//
// # Safety
// Pointer arguments must satisfy the crate-level convention.
enum ConedecStatus conedec_zariski(const struct ConedecDocument *doc,
                                   const char *divisor,
                                   char **out_json);

// MMP with scaling for comma-separated boundary coefficients.
//
// # Safety
// Pointer arguments must satisfy the crate-level convention.
enum ConedecStatus conedec_mmp(const struct ConedecDocument *doc,
                               const char *coefficients,
                               char **out_json);

// Canonical and minimal chamber decompositions of the boundary polytope.
//
// # Safety
// Pointer arguments must satisfy the crate-level convention.
enum ConedecStatus conedec_chambers(const struct ConedecDocument *doc, char **out_json);

// Chamber indices of an infinite family meeting a region
// (`"box x0 x1 y0 y1"` or `"point x y"`).
//
// # Safety
// Pointer arguments must satisfy the crate-level convention.
enum ConedecStatus conedec_walk(const struct ConedecDocument *doc,
                                const char *region,
                                char **out_json);

// Names and summaries of the built-in fixtures.
//
// # Safety
// `out_json` must be a valid pointer.
enum ConedecStatus conedec_gallery_list(char **out_json);

// Runs a fixture's self-checking computation.
//
// # Safety
// Pointer arguments must satisfy the crate-level convention.
enum ConedecStatus conedec_gallery_run(const char *name, char **out_json);

// Exports a fixture as an editable input document.
//
// # Safety
// Pointer arguments must satisfy the crate-level convention.
enum ConedecStatus conedec_gallery_export(const char *name, char **out_json);

// Renders a chamber decomposition JSON to an SVG string.
//
// # Safety
// Pointer arguments must satisfy the crate-level convention.
enum ConedecStatus conedec_render_svg(const char *decomposition_json, char **out_svg);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus
