#ifndef EVSTRUCT_H
#define EVSTRUCT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum EvsKind {
  EVS_KIND_ES = 0,
  EVS_KIND_SES = 1,
  EVS_KIND_NET = 2,
  EVS_KIND_PROB = 3,
} EvsKind;

// Result codes.
typedef enum EvsStatus {
  EVS_STATUS_OK = 0,
  EVS_STATUS_NULL_ARGUMENT = 1,
  EVS_STATUS_INVALID_UTF8 = 2,
  // Missing header or a malformed line.
  EVS_STATUS_SYNTAX = 3,
  // The text parsed but the structure it describes is invalid.
  EVS_STATUS_INVALID = 4,
  EVS_STATUS_NOT_A_CONFIGURATION = 5,
  EVS_STATUS_NOT_R_STOPPED = 6,
  EVS_STATUS_PRECONDITION = 7,
  EVS_STATUS_NOT_BINARY_GENERABLE = 8,
  EVS_STATUS_DISTRIBUTION = 9,
  EVS_STATUS_NET = 10,
  EVS_STATUS_TOO_LARGE = 11,
  // The document has the wrong kind for the call.
  EVS_STATUS_WRONG_KIND = 12,
  // Probabilities were requested on a truncated unfolding.
  EVS_STATUS_TRUNCATED = 13,
  EVS_STATUS_PANIC = 14,
} EvsStatus;

// A parsed document: an event structure, a stable event structure, a net
// or a distribution table.
typedef struct EvsDocument EvsDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static string.
const char *evs_version(void);

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on this thread.
const char *evs_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void evs_string_free(char *s);

// Parses a document in the text format.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum EvsStatus evs_document_parse(const char *text, struct EvsDocument **out);

// # Safety
// `doc` must be null or a document returned by this library, freed once.
void evs_document_free(struct EvsDocument *doc);

// # Safety
// `d` must be a live document; `out` must be writable.
enum EvsStatus evs_document_kind(const struct EvsDocument *d, enum EvsKind *out);

// Number of events of an es or ses document.
//
// # Safety
// `d` must be a live document; `out` must be writable.
enum EvsStatus evs_document_event_count(const struct EvsDocument *d, size_t *out);

// The document in the text format.
//
// # Safety
// `d` must be a live document; `out` must be writable.
enum EvsStatus evs_document_serialize(const struct EvsDocument *d, char **out);

// Graphviz rendering. When `at` is not null it names an R-stopped
// configuration (comma-separated events) whose enabled cells are drawn as
// clusters.
//
// # Safety
// `d` must be a live document, `at` null or a NUL-terminated string, and
// `out` writable.
enum EvsStatus evs_document_to_dot(const struct EvsDocument *d, const char *at, char **out);

// The report of `evstruct check` as a JSON object. `holds` receives
// whether every checked property holds.
//
// # Safety
// `d` must be a live document; `out_json` and `holds` must be writable.
enum EvsStatus evs_check_json(const struct EvsDocument *d, char **out_json, bool *holds);

// Whether `config` is an R-stopped configuration.
//
// # Safety
// `d` must be a live document, `config` a NUL-terminated string and `out`
// writable.
enum EvsStatus evs_is_r_stopped(const struct EvsDocument *d, const char *config, bool *out);

// The associated binary-conflict event structure of a ses document.
//
// # Safety
// `d` must be a live document; `out` must be writable.
enum EvsStatus evs_translate(const struct EvsDocument *d, struct EvsDocument **out);

// Unfolds a net document into an event structure of at most `max_events`
// events. `truncated` receives whether the bound cut the unfolding short.
//
// # Safety
// `d` must be a live document; `out` and `truncated` must be writable.
enum EvsStatus evs_unfold(const struct EvsDocument *d,
                          size_t max_events,
                          struct EvsDocument **out,
                          bool *truncated);

// Likelihood of an R-stopped configuration: the product of the local
// choice probabilities along its covering. `dist` is a prob document, or
// null for uniform choices.
//
// # Safety
// `d` must be a live document, `dist` null or a live document, `config` a
// NUL-terminated string and `out` writable.
enum EvsStatus evs_likelihood(const struct EvsDocument *d,
                              const struct EvsDocument *dist,
                              const char *config,
                              bool allow_truncated,
                              double *out);

// Measure of the maximal configurations extending `config`.
//
// # Safety
// As for [`evs_likelihood`].
enum EvsStatus evs_shadow_probability(const struct EvsDocument *d,
                                      const struct EvsDocument *dist,
                                      const char *config,
                                      bool allow_truncated,
                                      double *out);

// One seeded run to a maximal configuration, written as a braced event
// list.
//
// # Safety
// `d` must be a live document, `dist` null or a live document, and `out`
// writable.
enum EvsStatus evs_sample(const struct EvsDocument *d,
                          const struct EvsDocument *dist,
                          uint64_t seed,
                          char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVSTRUCT_H */
