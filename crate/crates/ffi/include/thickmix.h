#ifndef THICKMIX_H
#define THICKMIX_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Status codes returned by every fallible function.
typedef enum ThmStatus {
  THM_STATUS_OK = 0,
  THM_STATUS_NULL_POINTER = 1,
  THM_STATUS_INVALID_ARGUMENT = 2,
  THM_STATUS_INVALID_DEPTH = 3,
  THM_STATUS_DEPTH_EXCEEDS_CAP = 4,
  THM_STATUS_UNREACHABLE_RANGE = 5,
  THM_STATUS_NOT_CERTIFIED = 6,
  THM_STATUS_NOT_FOUND = 7,
  THM_STATUS_OVERFLOW = 8,
  THM_STATUS_BUDGET_EXHAUSTED = 9,
  THM_STATUS_PRECONDITION_VIOLATED = 10,
  THM_STATUS_CLAIM_FALSIFIED = 11,
  THM_STATUS_IO = 12,
  THM_STATUS_BUFFER_TOO_SMALL = 13,
  THM_STATUS_PANIC = 99,
} ThmStatus;

typedef enum ThmSuite {
  THM_SUITE_CHACON = 0,
  THM_SUITE_ZSET = 1,
  THM_SUITE_RETURNSET = 2,
  THM_SUITE_THICK = 3,
  THM_SUITE_TORUS = 4,
  THM_SUITE_MOEBIUS = 5,
  THM_SUITE_ALL = 6,
} ThmSuite;

// A Chacón block.
typedef struct ThmBlock ThmBlock;

// A finished run: the JSON report and its exit code.
typedef struct ThmReport ThmReport;

// A finite integer set restricted to a range, with its certified range.
typedef struct ThmZSet ThmZSet;

// Run parameters, mirroring the command-line flags. `suite` holds a
// `ThmSuite` value.
typedef struct ThmConfig {
  uint32_t suite;
  uint32_t depth;
  uint32_t trunc;
  int64_t range_lo;
  int64_t range_hi;
  uint64_t seed;
  uint64_t samples;
  uint64_t budget;
} ThmConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next `thm_*` call on the same thread.
const char *thm_last_error(void);

// Library version as a static NUL-terminated string.
const char *thm_version(void);

// `B_n` for `1 ≤ n ≤ 12`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum ThmStatus thm_chacon_block(uint32_t n, struct ThmBlock **out);

// Number of letters in the block; 0 for null.
//
// # Safety
// `block` must be null or a live handle.
uintptr_t thm_block_len(const struct ThmBlock *block);

// Copies the letters (0 or 1) into `buf`. Fails with `BufferTooSmall`
// when `cap` is below the block length.
//
// # Safety
// `block` must be a live handle and `buf` valid for `cap` writes.
enum ThmStatus thm_block_letters(const struct ThmBlock *block, uint8_t *buf, uintptr_t cap);

// # Safety
// `block` must be null or a handle not yet freed.
void thm_block_free(struct ThmBlock *block);

// `l_n = (3^{n+1} - 1)/2`.
//
// # Safety
// `out` must be valid for one write.
enum ThmStatus thm_block_length(uint32_t n, int64_t *out);

// `(3^{m+1} - 3)/2`.
//
// # Safety
// `out` must be valid for one write.
enum ThmStatus thm_gap_element(uint32_t m, int64_t *out);

// `H_m`.
//
// # Safety
// `out` must be valid for one write.
enum ThmStatus thm_h_set(uint32_t m, struct ThmZSet **out);

// `(H_k ⊕ ⋯ ⊕ H_{trunc-1}) ∩ [lo, hi]`.
//
// # Safety
// `out` must be valid for one write.
enum ThmStatus thm_truncated_h_sum(uint32_t k,
                                   uint32_t trunc,
                                   int64_t lo,
                                   int64_t hi,
                                   struct ThmZSet **out);

// `N([A]_a_offset, [B]_b_offset) ∩ [lo, hi]` by brute force in the
// depth-`depth` window. Words are arrays of 0/1 bytes.
//
// # Safety
// `a` and `b` must be valid for `a_len` and `b_len` reads; `out` for one
// write.
enum ThmStatus thm_return_set(const uint8_t *a,
                              uintptr_t a_len,
                              int64_t a_offset,
                              const uint8_t *b,
                              uintptr_t b_len,
                              int64_t b_offset,
                              uint32_t depth,
                              int64_t lo,
                              int64_t hi,
                              struct ThmZSet **out);

// Number of elements; 0 for null.
//
// # Safety
// `set` must be null or a live handle.
uintptr_t thm_zset_len(const struct ThmZSet *set);

// Copies the sorted elements into `buf`.
//
// # Safety
// `set` must be a live handle and `buf` valid for `cap` writes.
enum ThmStatus thm_zset_elements(const struct ThmZSet *set, int64_t *buf, uintptr_t cap);

// Whether `x` is an element; false for null.
//
// # Safety
// `set` must be null or a live handle.
bool thm_zset_contains(const struct ThmZSet *set, int64_t x);

// The range on which membership is exact. An empty range is reported as
// `lo > hi`.
//
// # Safety
// `set` must be a live handle; `lo` and `hi` valid for one write each.
enum ThmStatus thm_zset_certified_range(const struct ThmZSet *set, int64_t *lo, int64_t *hi);

// # Safety
// `set` must be null or a handle not yet freed.
void thm_zset_free(struct ThmZSet *set);

// The command-line defaults for `suite`.
struct ThmConfig thm_config_default(enum ThmSuite suite);

// Runs the configured suites. Configuration errors are returned as a
// status; failing checks are part of a successful report.
//
// # Safety
// `config` must be valid for one read and `out` for one write.
enum ThmStatus thm_run(const struct ThmConfig *config, struct ThmReport **out);

// The report as JSON. Owned by the handle.
//
// # Safety
// `report` must be null or a live handle.
const char *thm_report_json(const struct ThmReport *report);

// 0 when no check failed, 1 otherwise; -1 for null.
//
// # Safety
// `report` must be null or a live handle.
int32_t thm_report_exit_code(const struct ThmReport *report);

// Number of failed and finding records.
//
// # Safety
// `report` must be a live handle; `fail` and `finding` valid for one write.
enum ThmStatus thm_report_counts(const struct ThmReport *report,
                                 uintptr_t *fail,
                                 uintptr_t *finding);

// # Safety
// `report` must be null or a handle not yet freed.
void thm_report_free(struct ThmReport *report);

// Parses a suite name (`"chacon"`, …, `"all"`).
//
// # Safety
// `name` must be a NUL-terminated string; `out` valid for one write.
enum ThmStatus thm_suite_from_name(const char *name, enum ThmSuite *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* THICKMIX_H */
