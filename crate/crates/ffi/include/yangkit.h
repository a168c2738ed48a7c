#ifndef YANGKIT_H
#define YANGKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum YkStatus {
  YK_STATUS_OK = 0,
  YK_STATUS_NULL_POINTER = 1,
  YK_STATUS_INVALID_ARGUMENT = 2,
  YK_STATUS_CONFIG = 3,
  YK_STATUS_UTF8 = 4,
  YK_STATUS_PANIC = 5,
} YkStatus;

/**
 * A finished suite run.
 */
typedef struct YkReport YkReport;

/**
 * A Lie algebra so_N or sp_N.
 */
typedef struct YkSpec YkSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failing call on this thread. Owned by the library; valid until the next call.
 */
const char *yk_last_error(void);

/**
 * series is 'B', 'C' or 'D'.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum YkStatus yk_spec_new(char series, size_t n, struct YkSpec **out);

/**
 * # Safety
 * `spec` must come from `yk_spec_new` and not be used afterwards.
 */
void yk_spec_free(struct YkSpec *spec);

/**
 * "so5", "sp4", ... Owned by the handle.
 *
 * # Safety
 * `spec` must be a live handle or null.
 */
const char *yk_spec_name(const struct YkSpec *spec);

/**
 * N, the dimension of the natural module.
 *
 * # Safety
 * `spec` must be a live handle or null.
 */
size_t yk_spec_big_n(const struct YkSpec *spec);

/**
 * dim g_N.
 *
 * # Safety
 * `spec` must be a live handle or null.
 */
size_t yk_spec_dim(const struct YkSpec *spec);

/**
 * kappa = N/2 -+ 1 as a reduced fraction.
 *
 * # Safety
 * All pointers must be valid.
 */
enum YkStatus yk_spec_kappa(const struct YkSpec *spec, int64_t *num, int64_t *den);

/**
 * QYBE together with unitarity and crossing at zeta = num/den.
 *
 * # Safety
 * `spec` must be a live handle, `passed` a valid pointer.
 */
enum YkStatus yk_check_r_matrix(const struct YkSpec *spec,
                                int64_t zeta_num,
                                int64_t zeta_den,
                                bool *passed);

/**
 * Translation table as JSON. Free the string with `yk_string_free`.
 *
 * # Safety
 * `spec` must be a live handle, `out` a valid pointer.
 */
enum YkStatus yk_translation_table_json(const struct YkSpec *spec, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void yk_string_free(char *s);

/**
 * Runs suites from a JSON config:
 * {"specs": [["B", 2]], "zetas": ["1", "1/3"], "suites": ["qybe"], "order": 8, "rs_max": 3}.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string, `out` a valid pointer.
 */
enum YkStatus yk_run_suite(const char *config_json, struct YkReport **out);

/**
 * # Safety
 * `report` must be a live handle or null.
 */
bool yk_report_passed(const struct YkReport *report);

/**
 * Number of check records.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
size_t yk_report_len(const struct YkReport *report);

/**
 * Report as JSON. Owned by the handle.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
const char *yk_report_json(const struct YkReport *report);

/**
 * Report as aligned text. Owned by the handle.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
const char *yk_report_text(const struct YkReport *report);

/**
 * # Safety
 * `report` must come from `yk_run_suite` and not be used afterwards.
 */
void yk_report_free(struct YkReport *report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* YANGKIT_H */
