#ifndef KGALILEI_H
#define KGALILEI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every fallible call.
typedef enum KgStatus {
  KG_STATUS_OK = 0,
  // The call ran but at least one check failed.
  KG_STATUS_CHECK_FAILED = 1,
  KG_STATUS_USAGE = 2,
  KG_STATUS_PARSE = 3,
  // Precondition or domain violation, including the real-mass condition.
  KG_STATUS_DOMAIN = 4,
  KG_STATUS_IO = 5,
  KG_STATUS_NULL_POINTER = 6,
  KG_STATUS_INTERNAL = 7,
} KgStatus;

typedef enum KgGroup {
  KG_GROUP_HOPF = 0,
  KG_GROUP_COCYCLE = 1,
  KG_GROUP_NOGO = 2,
  KG_GROUP_REP = 3,
  KG_GROUP_CONTRACT = 4,
  KG_GROUP_APPENDIX = 5,
} KgGroup;

typedef enum KgFormat {
  KG_FORMAT_JSON = 0,
  KG_FORMAT_CSV = 1,
} KgFormat;

typedef struct KgSession KgSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// New session with the default configuration.
struct KgSession *kg_session_new(void);

// # Safety
// `s` must come from `kg_session_new` and not be used afterwards.
void kg_session_free(struct KgSession *s);

// Replaces the configuration with one parsed from TOML text.
//
// # Safety
// `s` must be a live session and `toml` a NUL-terminated string.
enum KgStatus kg_session_load_config(struct KgSession *s, const char *toml);

// # Safety
// `s` must be a live session.
enum KgStatus kg_session_set_seed(struct KgSession *s, uint64_t seed);

// Runs one check group, replacing the stored reports. Returns
// `KG_STATUS_CHECK_FAILED` when any check failed; `failed` receives the count.
//
// # Safety
// `s` must be a live session; `failed` may be null.
enum KgStatus kg_run_group(struct KgSession *s, enum KgGroup group, size_t *failed);

// Number of reports from the last run.
//
// # Safety
// `s` must be a live session.
size_t kg_report_count(const struct KgSession *s);

// Reports of the last run rendered as JSON or CSV; free with `kg_string_free`.
//
// # Safety
// `s` must be a live session.
char *kg_reports_render(struct KgSession *s, enum KgFormat format);

// Normal form of an expression at truncation `(order, degree)`.
//
// # Safety
// `s` must be a live session, `expr` a NUL-terminated string and `out` a
// valid pointer; on success `*out` must be released with `kg_string_free`.
enum KgStatus kg_eval(struct KgSession *s,
                      const char *expr,
                      uint32_t order,
                      uint32_t degree,
                      char **out);

// Contraction mass m = −(k/2c²) ln(1 − 2Mc²/k).
//
// # Safety
// `s` must be a live session and `out` a valid pointer.
enum KgStatus kg_mass_of(struct KgSession *s, double mass, double k, double c, double *out);

// Message of the last failed call on `s`, or an empty string.
//
// # Safety
// `s` must be a live session.
const char *kg_last_error(const struct KgSession *s);

// # Safety
// `p` must come from this library and not be freed twice.
void kg_string_free(char *p);

// Library version, statically allocated.
const char *kg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KGALILEI_H */
