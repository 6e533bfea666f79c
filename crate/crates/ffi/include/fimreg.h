#ifndef FIMREG_H
#define FIMREG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FimregStatus {
  FIMREG_STATUS_OK = 0,
  // A check or campaign ran and found a violation.
  FIMREG_STATUS_VIOLATION = 1,
  FIMREG_STATUS_INPUT = 2,
  FIMREG_STATUS_BUDGET = 3,
  FIMREG_STATUS_INTERNAL = 4,
  FIMREG_STATUS_NULL_POINTER = 5,
  FIMREG_STATUS_PANIC = 6,
} FimregStatus;

// Opaque module handle, optionally carrying the presentation it came from.
typedef struct FimregModule FimregModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *fimreg_version(void);

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next call into the library on this thread.
const char *fimreg_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void fimreg_string_free(char *s);

// Parses a presentation or module file given as JSON text.
//
// # Safety
// `json` must be a valid C string and `out` a writable pointer.
enum FimregStatus fimreg_module_from_json(const char *json, struct FimregModule **out);

// Builds the seeded random presentation `(m, d, r)` on the window `N = top`.
// `field` is `p=<prime>` or `rationals`; null means `p=101`.
//
// # Safety
// `field` must be null or a valid C string and `out` a writable pointer.
enum FimregStatus fimreg_module_build(size_t m,
                                      int64_t d,
                                      int64_t r,
                                      size_t top,
                                      size_t generators,
                                      size_t relations,
                                      uint64_t seed,
                                      const char *field,
                                      struct FimregModule **out);

// # Safety
// `h` must be null or a handle from this library, not yet freed.
void fimreg_module_free(struct FimregModule *h);

// Writes `m`, `N` and the total dimension over the window.
//
// # Safety
// `h` must be a live handle; the out pointers must be writable.
enum FimregStatus fimreg_module_shape(const struct FimregModule *h,
                                      size_t *m,
                                      size_t *top,
                                      size_t *total_dim);

// Serializes the module (not the presentation) as a module file.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum FimregStatus fimreg_module_to_json(const struct FimregModule *h, char **out);

// Serializes the presentation the module was built from, if any.
//
// # Safety
// `h` must be a live handle and `out` writable.
enum FimregStatus fimreg_module_presentation_json(const struct FimregModule *h, char **out);

// Counts violated functor relations; `Violation` when any.
//
// # Safety
// `h` must be a live handle and `violations` writable.
enum FimregStatus fimreg_module_validate(const struct FimregModule *h, size_t *violations);

// Homology table as JSON. `engine` is `resolution`, `koszul` or `oracle`;
// null means `resolution`.
//
// # Safety
// `h` must be a live handle, `engine` null or a valid C string, `out` writable.
enum FimregStatus fimreg_module_homology(const struct FimregModule *h,
                                         size_t max_i,
                                         const char *engine,
                                         char **out);

// Runs one functor check (`four-term`, `two-row`, `church`, `split-h0`,
// `restrict-free`) and writes its JSON report; `Violation` when it fails.
//
// # Safety
// `h` must be a live handle, `check` a valid C string, `out` writable.
enum FimregStatus fimreg_module_check(const struct FimregModule *h,
                                      const char *check,
                                      size_t max_i,
                                      char **out);

// `rho_m(d, r)` as a decimal string, or a symbolic form over atoms when the
// value is too large to expand.
//
// # Safety
// `out` must be writable.
enum FimregStatus fimreg_rho(size_t m, int64_t d, int64_t r, char **out);

// Runs a campaign from its JSON config and writes the JSON report;
// `Violation` when the verdict is `fail`.
//
// # Safety
// `config` must be a valid C string and `out` writable.
enum FimregStatus fimreg_run_campaign(const char *config, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIMREG_H */
