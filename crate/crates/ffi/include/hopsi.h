#ifndef HOPSI_H
#define HOPSI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The first five agree with the exit codes of the `hopsi` binary.
 */
typedef enum HopsiStatus {
  HOPSI_STATUS_OK = 0,
  HOPSI_STATUS_TYPE_ERROR = 1,
  HOPSI_STATUS_PARSE_ERROR = 2,
  HOPSI_STATUS_WRONG = 3,
  HOPSI_STATUS_COUNTEREXAMPLE = 4,
  HOPSI_STATUS_NULL_ARGUMENT = 5,
  HOPSI_STATUS_INVALID_UTF8 = 6,
  HOPSI_STATUS_UNKNOWN_INSTANCE = 7,
  HOPSI_STATUS_PANIC = 8,
} HopsiStatus;

/**
 * Strategy selector for [`hopsi_program_run`].
 */
typedef enum HopsiStrategy {
  HOPSI_STRATEGY_FIRST = 0,
  HOPSI_STRATEGY_RANDOM = 1,
  HOPSI_STRATEGY_ALL = 2,
} HopsiStrategy;

/**
 * A parsed program.
 */
typedef struct HopsiProgram HopsiProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `source`. `instance` may be null when the source has an
 * `instance` header. On success `*out` receives a handle to release with
 * [`hopsi_program_free`]; on a parse error `*message` (when not null)
 * receives the error text.
 *
 * # Safety
 * `source` and a non-null `instance` must be valid NUL-terminated strings;
 * `out` must be valid for writes; `message` must be null or valid for writes.
 */
enum HopsiStatus hopsi_program_parse(const char *source,
                                     const char *instance,
                                     struct HopsiProgram **out,
                                     char **message);

/**
 * Releases a handle from [`hopsi_program_parse`]. Null is ignored.
 *
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void hopsi_program_free(struct HopsiProgram *p);

/**
 * The canonical source text of a program.
 *
 * # Safety
 * `p` must be a live handle; `out` must be valid for writes.
 */
enum HopsiStatus hopsi_program_print(const struct HopsiProgram *p, char **out);

/**
 * Type-checks a program. `*out` (when not null) receives the report,
 * as JSON when `json` is non-zero.
 *
 * # Safety
 * `p` must be a live handle; `out` must be null or valid for writes.
 */
enum HopsiStatus hopsi_program_check(const struct HopsiProgram *p, bool json, char **out);

/**
 * Reduces a program for at most `max_steps` steps and writes the trace.
 * Returns [`HopsiStatus::Wrong`] when `detect_wrong` is set and a WRONG
 * state is reached.
 *
 * # Safety
 * `p` must be a live handle; `out` must be null or valid for writes.
 */
enum HopsiStatus hopsi_program_run(const struct HopsiProgram *p,
                                   size_t max_steps,
                                   enum HopsiStrategy strategy,
                                   uint64_t seed,
                                   bool json,
                                   bool detect_wrong,
                                   char **out);

/**
 * Translates a rho program.
 *
 * # Safety
 * `p` must be a live handle; `out` must be null or valid for writes.
 */
enum HopsiStatus hopsi_program_encode(const struct HopsiProgram *p, bool typed, char **out);

/**
 * Compares two programs by name equivalence (`structural` false) or
 * structural congruence. Returns [`HopsiStatus::Counterexample`] when
 * they differ.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be null or valid for writes.
 */
enum HopsiStatus hopsi_program_eq(const struct HopsiProgram *a,
                                  const struct HopsiProgram *b,
                                  bool structural,
                                  char **out);

/**
 * Releases a string handed out by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void hopsi_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOPSI_H */
