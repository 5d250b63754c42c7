#ifndef DETMLD_H
#define DETMLD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Marks an infinite entry of an extended partition.
 */
#define DETMLD_INF UINT64_MAX

typedef enum DetmldStatus {
  DETMLD_STATUS_OK = 0,
  /**
   * An input violated a precondition.
   */
  DETMLD_STATUS_INVALID = 1,
  /**
   * The computation is outside the supported size.
   */
  DETMLD_STATUS_GUARD = 2,
  /**
   * An internal consistency check failed.
   */
  DETMLD_STATUS_INCONSISTENT = 3,
  /**
   * Malformed text input.
   */
  DETMLD_STATUS_PARSE = 4,
  DETMLD_STATUS_NULL_POINTER = 5,
  DETMLD_STATUS_PANIC = 6,
} DetmldStatus;

typedef enum DetmldTargetKind {
  /**
   * At a matrix of rank `index`.
   */
  DETMLD_TARGET_KIND_POINT = 0,
  /**
   * Along `D^{k-index}`.
   */
  DETMLD_TARGET_KIND_LOCUS = 1,
} DetmldTargetKind;

/**
 * Opaque determinantal pair `(M, α_1 D^{m-1} + … + α_k D^{m-k})`.
 */
typedef struct DetmldPair DetmldPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a pair from `len` coefficients `alpha_num[i] / alpha_den[i]`
 * (missing ones are zero). `alpha_num` and `alpha_den` may be null when
 * `len` is 0.
 *
 * # Safety
 * The coefficient arrays must hold `len` readable values and `out` must be
 * writable.
 */
enum DetmldStatus detmld_pair_new(size_t m,
                                  size_t k,
                                  const int64_t *alpha_num,
                                  const int64_t *alpha_den,
                                  size_t len,
                                  struct DetmldPair **out);

/**
 * # Safety
 * `pair` must come from [`detmld_pair_new`] and not be used afterwards.
 */
void detmld_pair_free(struct DetmldPair *pair);

/**
 * mld at a rank-`q` matrix as `"p/q"` or `"-inf"`.
 *
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum DetmldStatus detmld_mld_at_rank(const struct DetmldPair *pair, size_t q, char **out);

/**
 * mld along `D^{k-j}` as `"p/q"` or `"-inf"`.
 *
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum DetmldStatus detmld_mld_along(const struct DetmldPair *pair, size_t j, char **out);

/**
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum DetmldStatus detmld_is_lc_at_rank(const struct DetmldPair *pair, size_t q, bool *out);

/**
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum DetmldStatus detmld_is_lc_along(const struct DetmldPair *pair, size_t j, bool *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum DetmldStatus detmld_is_terminal(size_t m, size_t k, bool *out);

/**
 * Codimension of the orbit of `diag(t^λ)` in the arcs of `D^k`; entries
 * equal to [`DETMLD_INF`] are infinite.
 *
 * # Safety
 * `lambda` must hold `len` values and `out` be writable.
 */
enum DetmldStatus detmld_orbit_codim(size_t m,
                                     size_t k,
                                     const uint64_t *lambda,
                                     size_t len,
                                     uint64_t *out);

/**
 * Contact order `w_i` along `D^{k-i}`; [`DETMLD_INF`] when infinite.
 *
 * # Safety
 * `lambda` must hold `len` values and `out` be writable.
 */
enum DetmldStatus detmld_contact_order(size_t m,
                                       size_t k,
                                       const uint64_t *lambda,
                                       size_t len,
                                       size_t i,
                                       uint64_t *out);

/**
 * Oracle search with tails bounded by `bound`, compared with the closed
 * form, as JSON `{"oracle": …, "closed_form": …, "agree": …}`.
 *
 * # Safety
 * `pair` must be a live handle and `out` writable.
 */
enum DetmldStatus detmld_oracle_json(const struct DetmldPair *pair,
                                     enum DetmldTargetKind kind,
                                     size_t index,
                                     uint64_t bound,
                                     char **out);

/**
 * Straightens a double tableau given as JSON
 * `{"left": {"shape": …, "rows": …}, "right": …}`. `k_bound` 0 means no
 * bound.
 *
 * # Safety
 * `tableau_json` must be a nul-terminated string and `out` writable.
 */
enum DetmldStatus detmld_straighten_json(const char *tableau_json,
                                         size_t m,
                                         size_t k_bound,
                                         char **out);

/**
 * Full canonical-form report for `D^k` in `m × m` matrices (`m ≤ 3`).
 *
 * # Safety
 * `out` must be writable.
 */
enum DetmldStatus detmld_nash_verify_json(size_t m, size_t k, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void detmld_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library on this thread.
 */
const char *detmld_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DETMLD_H */
