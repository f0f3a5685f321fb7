#ifndef GALOIS_POINTS_H
#define GALOIS_POINTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define GP_OK 0

#define GP_NULL_POINTER 1

#define GP_INVALID_ARGUMENT 2

#define GP_CHECK_FAILED 3

#define GP_INTERNAL 4

/**
 * A finite field `F_{p^k}`. Elements are passed as their integer encoding
 * in `0 .. p^k`.
 */
typedef struct GpField GpField;

/**
 * The result of one verification run.
 */
typedef struct GpReport GpReport;

/**
 * Message for the last failed call on this thread; empty if none. Valid
 * until the next call on the same thread.
 */
const char *gp_last_error(void);

/**
 * Builds `F_{p^k}` into `*out`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
int32_t gp_field_new(uint64_t p, uint32_t k, struct GpField **out);

/**
 * Number of elements, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live handle from `gp_field_new`.
 */
uint64_t gp_field_size(const struct GpField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
int32_t gp_field_add(const struct GpField *field, uint32_t a, uint32_t b, uint32_t *out);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
int32_t gp_field_mul(const struct GpField *field, uint32_t a, uint32_t b, uint32_t *out);

/**
 * `a / b`; fails with `GP_INVALID_ARGUMENT` when `b = 0`.
 *
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
int32_t gp_field_div(const struct GpField *field, uint32_t a, uint32_t b, uint32_t *out);

/**
 * # Safety
 * `field` must be null or a handle from `gp_field_new`, freed once.
 */
void gp_field_free(struct GpField *field);

/**
 * Runs the checks named by `selector` (`thm1a`, `thm1b`, `thm2`, `lemma1`,
 * `prop1`, `all`). Pass `m = 0` or `r = 0` to leave that parameter unset.
 * The report is written to `*out` even when checks fail; the return value
 * is then `GP_CHECK_FAILED`.
 *
 * # Safety
 * `selector` must be a NUL-terminated string and `out` writable.
 */
int32_t gp_run(uint64_t p,
               uint32_t n,
               uint64_t m,
               uint32_t r,
               const char *selector,
               uint64_t seed,
               struct GpReport **out);

/**
 * 1 if every check passed, 0 otherwise (including a null handle).
 *
 * # Safety
 * `report` must be null or a live handle from `gp_run`.
 */
int32_t gp_report_passed(const struct GpReport *report);

/**
 * Number of checks in the report.
 *
 * # Safety
 * `report` must be null or a live handle from `gp_run`.
 */
uintptr_t gp_report_len(const struct GpReport *report);

/**
 * The report as JSON with sorted keys; release with `gp_string_free`.
 * Null for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle from `gp_run`.
 */
char *gp_report_json(const struct GpReport *report);

/**
 * # Safety
 * `report` must be null or a handle from `gp_run`, freed once.
 */
void gp_report_free(struct GpReport *report);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void gp_string_free(char *s);

#endif  /* GALOIS_POINTS_H */
