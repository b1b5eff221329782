/* C interface of the linadv experiment runner. */

#ifndef LINADV_H
#define LINADV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; nonzero values match the CLI exit codes where one
// exists (2 config error, 3 aborted by blow-up).
typedef enum linadv_status {
  LINADV_STATUS_OK = 0,
  // Invalid configuration, key, value, or unreadable input.
  LINADV_STATUS_CONFIG = 2,
  // The run blew up; the CSV was still written, truncated, with an
  // abort trailer.
  LINADV_STATUS_ABORTED = 3,
  // I/O failure or internal error.
  LINADV_STATUS_RUNTIME = 4,
  // A required pointer argument was null.
  LINADV_STATUS_NULL_ARGUMENT = 5,
} linadv_status;

// Opaque run-configuration handle.
typedef struct linadv_config linadv_config;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *linadv_version(void);

// Message describing the most recent failure on this thread. The
// pointer stays valid until the next failing call on the same thread.
const char *linadv_last_error(void);

// Create a configuration with default settings for the named test case
// (a_x, a_x2, a_1mx2, a_cos). On success `*out` owns the handle.
//
// # Safety
// `case` must be a valid NUL-terminated string; `out` must be valid.
enum linadv_status linadv_config_default(const char *case_, struct linadv_config **out);

// Parse key=value configuration text (same syntax as config files and
// CSV metadata blocks). On success `*out` owns the handle.
//
// # Safety
// `text` must be a valid NUL-terminated string; `out` must be valid.
enum linadv_status linadv_config_parse(const char *text, struct linadv_config **out);

// Set one key to a value, e.g. ("K", "80"). Unknown keys are rejected.
//
// # Safety
// `cfg` must come from a constructor; `key` and `value` must be valid
// NUL-terminated strings.
enum linadv_status linadv_config_set(struct linadv_config *cfg, const char *key, const char *value);

// Canonical text form of the configuration. The returned string must be
// released with `linadv_string_free`.
//
// # Safety
// `cfg` must come from a constructor; `out` must be valid.
enum linadv_status linadv_config_text(const struct linadv_config *cfg, char **out);

// Execute the run and write its CSV. `path` overrides the config's
// `out` key when non-null; `note` adds a metadata note line. A blow-up
// returns `Aborted` after writing the truncated CSV.
//
// # Safety
// `cfg` must come from a constructor; `path` and `note` must be valid
// NUL-terminated strings or null.
enum linadv_status linadv_run_to_csv(const struct linadv_config *cfg,
                                     const char *path,
                                     const char *note);

// Release a configuration handle. Null is a no-op.
//
// # Safety
// `cfg` must come from a constructor and not be used afterwards.
void linadv_config_free(struct linadv_config *cfg);

// Release a string returned by `linadv_config_text`. Null is a no-op.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void linadv_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LINADV_H */
