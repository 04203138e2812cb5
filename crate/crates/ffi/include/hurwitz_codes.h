#ifndef HURWITZ_CODES_H
#define HURWITZ_CODES_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HcStatus {
  HC_STATUS_OK = 0,
  HC_STATUS_NULL_POINTER = 1,
  HC_STATUS_PARSE = 2,
  HC_STATUS_NOT_PRIME = 3,
  HC_STATUS_OVERFLOW = 4,
  HC_STATUS_RATE_MODULUS = 5,
  HC_STATUS_ZERO_DIMENSION = 6,
  HC_STATUS_INVALID_ARGUMENT = 7,
  HC_STATUS_OUT_OF_RANGE = 8,
  HC_STATUS_VERIFICATION_FAILED = 9,
  HC_STATUS_INTERNAL = 10,
} HcStatus;

/**
 * A prime Hurwitz modulus.
 */
typedef struct HcModulus HcModulus;

/**
 * The residue table of a modulus.
 */
typedef struct HcResidueTable HcResidueTable;

typedef struct HcResidueEntry {
  int64_t z;
  /**
   * 1 or 2.
   */
  uint8_t branch;
  int64_t residue_doubled[4];
  uint64_t norm1;
  uint64_t norm2;
} HcResidueEntry;

typedef struct HcCodeRate {
  uint64_t n;
  uint32_t k;
  uint64_t rate_num;
  uint64_t rate_den;
} HcCodeRate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message on this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t hc_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hc_version(void);

/**
 * Modulus from doubled coordinates, e.g. `{5, 3, 3, 3}`.
 *
 * # Safety
 * `doubled` must point to four `int64_t`; `out` must be writable.
 */
enum HcStatus hc_modulus_new(const int64_t *doubled, struct HcModulus **out);

/**
 * Modulus from text such as `"5/2+3/2i+3/2j+3/2k"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum HcStatus hc_modulus_parse(const char *text, struct HcModulus **out);

/**
 * # Safety
 * `m` must be null or a handle from `hc_modulus_new` / `hc_modulus_parse`
 * that has not been freed.
 */
void hc_modulus_free(struct HcModulus *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_modulus_norm(const struct HcModulus *m, uint64_t *out);

/**
 * # Safety
 * `m` must be a live handle; `out` must point to four writable `int64_t`.
 */
enum HcStatus hc_modulus_alpha(const struct HcModulus *m, int64_t *out);

/**
 * Residue of `z` under the min rule.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_mu(const struct HcModulus *m, int64_t z, struct HcResidueEntry *out);

/**
 * Whether `a - b` lies in `alpha H`.
 *
 * # Safety
 * `m` must be a live handle; `a` and `b` must point to four `int64_t`;
 * `out` must be writable.
 */
enum HcStatus hc_left_congruent(const struct HcModulus *m,
                                const int64_t *a,
                                const int64_t *b,
                                bool *out);

/**
 * Average energy `num / den` of the residue set, in lowest terms.
 *
 * # Safety
 * `m` must be a live handle; `num` and `den` must be writable.
 */
enum HcStatus hc_average_energy(const struct HcModulus *m, uint64_t *num, uint64_t *den);

/**
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_residue_table_new(const struct HcModulus *m, struct HcResidueTable **out);

/**
 * # Safety
 * `t` must be null or a live handle from `hc_residue_table_new`.
 */
void hc_residue_table_free(struct HcResidueTable *t);

/**
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_residue_table_len(const struct HcResidueTable *t, size_t *out);

/**
 * # Safety
 * `t` must be a live handle; `out` must be writable.
 */
enum HcStatus hc_residue_table_entry(const struct HcResidueTable *t,
                                     size_t index,
                                     struct HcResidueEntry *out);

/**
 * Length and rate of a code over `H` for prime `p ≡ 1 (mod 24)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HcStatus hc_code_rate(uint64_t p, uint32_t k, struct HcCodeRate *out);

/**
 * Runs every check on every prime modulus of norm at most `norm_bound`.
 * Returns `VerificationFailed` and the failure count when a counterexample
 * is found.
 *
 * # Safety
 * `failures` must be null or writable.
 */
enum HcStatus hc_verify_suite(uint64_t norm_bound, uint64_t *failures);

/**
 * Runs every check on a single modulus.
 *
 * # Safety
 * `m` must be a live handle; `failures` must be null or writable.
 */
enum HcStatus hc_verify_modulus(const struct HcModulus *m, uint64_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HURWITZ_CODES_H */
