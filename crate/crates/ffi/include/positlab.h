#ifndef POSITLAB_H
#define POSITLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlStatus {
  PL_STATUS_OK = 0,
  PL_STATUS_NULL_POINTER = 1,
  PL_STATUS_INVALID_FORMAT = 2,
  PL_STATUS_PATTERN_TOO_WIDE = 3,
  PL_STATUS_QUIRE_UNSUPPORTED = 4,
  PL_STATUS_INVALID_UTF8 = 5,
  PL_STATUS_ASSEMBLY = 6,
  PL_STATUS_OUT_OF_RANGE = 7,
  PL_STATUS_PANIC = 8,
} PlStatus;

typedef enum PlOp {
  PL_OP_ADD = 0,
  PL_OP_SUB = 1,
  PL_OP_MUL = 2,
  PL_OP_DIV = 3,
} PlOp;

typedef struct PlProgram PlProgram;

typedef struct PlQuire PlQuire;

typedef struct PlRun PlRun;

/**
 * Posit format: `n` bits, `es` exponent bits.
 */
typedef struct PlPositFormat {
  uint32_t n;
  uint32_t es;
} PlPositFormat;

/**
 * Narrow float format. `finite_only` selects the FP8E4M3 style encoding
 * without infinities.
 */
typedef struct PlFloatFormat {
  uint32_t exp_bits;
  uint32_t man_bits;
  bool finite_only;
} PlFloatFormat;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pl_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t pl_last_error(char *buf, size_t len);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_posit_binary(struct PlPositFormat fmt,
                              enum PlOp op,
                              uint32_t a,
                              uint32_t b,
                              uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_posit_sqrt(struct PlPositFormat fmt, uint32_t a, uint32_t *out);

/**
 * Writes -1, 0 or 1. NaR orders below every other value.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_posit_compare(struct PlPositFormat fmt, uint32_t a, uint32_t b, int32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_posit_from_f64(struct PlPositFormat fmt, double x, uint32_t *out);

/**
 * NaR converts to NaN.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_posit_to_f64(struct PlPositFormat fmt, uint32_t a, double *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_float_binary(struct PlFloatFormat fmt,
                              enum PlOp op,
                              uint32_t a,
                              uint32_t b,
                              uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_float_sqrt(struct PlFloatFormat fmt, uint32_t a, uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_float_from_f64(struct PlFloatFormat fmt, double x, uint32_t *out);

/**
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_float_to_f64(struct PlFloatFormat fmt, uint32_t a, double *out);

/**
 * Creates a cleared quire. Only `es = 2` formats have one.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum PlStatus pl_quire_new(struct PlPositFormat fmt, struct PlQuire **out);

/**
 * # Safety
 * `q` must be null or a handle from [`pl_quire_new`] not yet freed.
 */
void pl_quire_free(struct PlQuire *q);

/**
 * # Safety
 * `q` must be null or a live quire handle.
 */
enum PlStatus pl_quire_clear(struct PlQuire *q);

/**
 * # Safety
 * `q` must be null or a live quire handle.
 */
enum PlStatus pl_quire_negate(struct PlQuire *q);

/**
 * Adds the exact product `a * b`.
 *
 * # Safety
 * `q` must be null or a live quire handle.
 */
enum PlStatus pl_quire_mac(struct PlQuire *q, uint32_t a, uint32_t b);

/**
 * Rounds the quire once to the nearest posit.
 *
 * # Safety
 * `q` must be null or a live quire handle; `out` null or valid for writes.
 */
enum PlStatus pl_quire_round(const struct PlQuire *q, uint32_t *out);

/**
 * Assembles NUL-terminated program text.
 *
 * # Safety
 * `text` must be null or a NUL-terminated string; `out` null or valid.
 */
enum PlStatus pl_program_assemble(const char *text, struct PlProgram **out);

/**
 * # Safety
 * `p` must be null or a handle from [`pl_program_assemble`] not yet freed.
 */
void pl_program_free(struct PlProgram *p);

/**
 * Runs a program from a fresh machine until `halt`, the end of the program,
 * or `limit` retired instructions.
 *
 * # Safety
 * `program` must be null or a live program handle; `out` null or valid.
 */
enum PlStatus pl_run(const struct PlProgram *program,
                     struct PlPositFormat fmt,
                     uint64_t limit,
                     struct PlRun **out);

/**
 * # Safety
 * `r` must be null or a handle from [`pl_run`] not yet freed.
 */
void pl_run_free(struct PlRun *r);

/**
 * Writes 1 if the run stopped normally, 0 if it hit the instruction limit.
 *
 * # Safety
 * `r` must be null or a live run handle; `out` null or valid.
 */
enum PlStatus pl_run_halted(const struct PlRun *r, bool *out);

/**
 * # Safety
 * `r` must be null or a live run handle; `out` null or valid.
 */
enum PlStatus pl_run_retired(const struct PlRun *r, uint64_t *out);

/**
 * # Safety
 * `r` must be null or a live run handle; `out` null or valid.
 */
enum PlStatus pl_run_preg(const struct PlRun *r, uint32_t index, uint32_t *out);

/**
 * # Safety
 * `r` must be null or a live run handle; `out` null or valid.
 */
enum PlStatus pl_run_xreg(const struct PlRun *r, uint32_t index, int64_t *out);

/**
 * Copies the final machine state dump into `buf` like [`pl_last_error`] and
 * stores the full length in `needed`.
 *
 * # Safety
 * `r` must be null or a live run handle; `buf` null or `len` writable bytes;
 * `needed` null or valid.
 */
enum PlStatus pl_run_dump(const struct PlRun *r, char *buf, size_t len, size_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSITLAB_H */
