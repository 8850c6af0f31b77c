#ifndef LATINWALK_H
#define LATINWALK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LwStatus {
  LW_STATUS_OK = 0,
  LW_STATUS_NULL_POINTER = 1,
  LW_STATUS_INVALID_ARGUMENT = 2,
  LW_STATUS_PARSE_ERROR = 3,
  LW_STATUS_INVALID_SQUARE = 4,
  LW_STATUS_INVALID_MOVE = 5,
  LW_STATUS_ORDER_MISMATCH = 6,
  LW_STATUS_INTERNAL = 7,
} LwStatus;

/**
 * A validated sequence of moves with its start and end squares.
 */
typedef struct LwMoveSequence LwMoveSequence;

/**
 * One chain of the square sampler.
 */
typedef struct LwSampler LwSampler;

/**
 * A proper or improper Latin square.
 */
typedef struct LwSquare LwSquare;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * Valid until the next failing call on the same thread.
 */
const char *lw_last_error(void);

/**
 * Parses one square in the text or JSON form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum LwStatus lw_square_parse(const char *text, struct LwSquare **out);

/**
 * The square with `(i + j) mod n` in cell `(i, j)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LwStatus lw_square_cyclic(size_t n, struct LwSquare **out);

/**
 * # Safety
 * `sq` must be null or a handle from this library, not yet freed.
 */
enum LwStatus lw_square_clone(const struct LwSquare *sq, struct LwSquare **out);

/**
 * # Safety
 * `sq` must be null or a handle from this library, not yet freed.
 */
void lw_square_free(struct LwSquare *sq);

/**
 * # Safety
 * `sq` must be a live handle and `out` writable.
 */
enum LwStatus lw_square_order(const struct LwSquare *sq, size_t *out);

/**
 * # Safety
 * `sq` must be a live handle and `out` writable.
 */
enum LwStatus lw_square_is_proper(const struct LwSquare *sq, bool *out);

/**
 * Symbol in cell `(row, col)`, or `-1` for the improper cell.
 *
 * # Safety
 * `sq` must be a live handle and `out` writable.
 */
enum LwStatus lw_square_symbol(const struct LwSquare *sq, size_t row, size_t col, int32_t *out);

/**
 * Text form of the square; release with [`lw_string_free`].
 *
 * # Safety
 * `sq` must be a live handle and `out` writable.
 */
enum LwStatus lw_square_to_text(const struct LwSquare *sq, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void lw_string_free(char *s);

/**
 * Applies the `((i,j;a),(i2,j2;b))` move in place. On failure the square is
 * unchanged.
 *
 * # Safety
 * `sq` must be a live handle.
 */
enum LwStatus lw_square_apply_move(struct LwSquare *sq,
                                   size_t i,
                                   size_t j,
                                   size_t a,
                                   size_t i2,
                                   size_t j2,
                                   size_t b);

/**
 * Squares are equal as cubes.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum LwStatus lw_square_equal(const struct LwSquare *a, const struct LwSquare *b, bool *out);

/**
 * A move sequence from `a` to `b`.
 *
 * # Safety
 * Both handles must be live and `out` writable.
 */
enum LwStatus lw_transform_path(const struct LwSquare *a,
                                const struct LwSquare *b,
                                struct LwMoveSequence **out);

/**
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum LwStatus lw_moveseq_len(const struct LwMoveSequence *seq, size_t *out);

/**
 * Move `index` as `{i, j, a, i2, j2, b}` in canonical form.
 *
 * # Safety
 * `seq` must be a live handle and `out` must point to 6 writable values.
 */
enum LwStatus lw_moveseq_get(const struct LwMoveSequence *seq, size_t index, size_t *out);

/**
 * Final square of the sequence, as a new handle.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum LwStatus lw_moveseq_end(const struct LwMoveSequence *seq, struct LwSquare **out);

/**
 * # Safety
 * `seq` must be null or a handle from this library, not yet freed.
 */
void lw_moveseq_free(struct LwMoveSequence *seq);

/**
 * Sampler with the default burn-in (`10 n^3` steps) and thinning (`n^3`
 * proper visits).
 *
 * # Safety
 * `out` must be writable.
 */
enum LwStatus lw_sampler_new(size_t n, uint64_t seed, struct LwSampler **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LwStatus lw_sampler_new_with(size_t n,
                                  uint64_t seed,
                                  uint64_t burn_in,
                                  uint64_t thin,
                                  struct LwSampler **out);

/**
 * Next recorded proper square, as a new handle.
 *
 * # Safety
 * `sampler` must be a live handle and `out` writable.
 */
enum LwStatus lw_sampler_next(struct LwSampler *sampler, struct LwSquare **out);

/**
 * # Safety
 * `sampler` must be null or a handle from this library, not yet freed.
 */
void lw_sampler_free(struct LwSampler *sampler);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATINWALK_H */
