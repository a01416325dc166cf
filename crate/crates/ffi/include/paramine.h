#ifndef PARAMINE_H
#define PARAMINE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ParamineStatus {
  ParamineStatus_Ok = 0,
  ParamineStatus_NullPointer = 1,
  ParamineStatus_InvalidUtf8 = 2,
  ParamineStatus_InvalidArgument = 3,
  ParamineStatus_Io = 4,
  ParamineStatus_Parse = 5,
  ParamineStatus_UnknownPhrase = 6,
  ParamineStatus_NoCooccurrence = 7,
  ParamineStatus_AsymmetricScheme = 8,
  ParamineStatus_OutOfRange = 9,
  ParamineStatus_Panic = 10,
  ParamineStatus_Other = 11,
} ParamineStatus;

typedef enum ParamineScheme {
  ParamineScheme_CondProb = 0,
  ParamineScheme_JointProb = 1,
  ParamineScheme_Pmi = 2,
  ParamineScheme_JointTimesPmi = 3,
  ParamineScheme_SumPmi = 4,
} ParamineScheme;

typedef enum ParamineLabel {
  ParamineLabel_Good = 0,
  ParamineLabel_MostlyGood = 1,
  ParamineLabel_MostlyBad = 2,
  ParamineLabel_Bad = 3,
  ParamineLabel_DiscardedTrash = 4,
  ParamineLabel_DiscardedDisagree = 5,
} ParamineLabel;

typedef enum ParamineCategory {
  ParamineCategory_Good = 4,
  ParamineCategory_MostlyGood = 3,
  ParamineCategory_MostlyBad = 2,
  ParamineCategory_Bad = 1,
  ParamineCategory_Trash = 0,
} ParamineCategory;

/**
 * A ranked candidate list.
 */
typedef struct ParamineRanked ParamineRanked;

/**
 * One or more co-occurrence tables, one per pivot corpus.
 */
typedef struct ParamineTables ParamineTables;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build identifier, e.g. `paramine 0.1.0`. Static; do not free.
 */
const char *paramine_version(void);

/**
 * Message of the last failed call on this thread. Valid until the next
 * failing call on the same thread.
 */
const char *paramine_last_error(void);

/**
 * Loads `n` saved `.counts` files.
 *
 * # Safety
 * `paths` must point to `n` NUL-terminated strings; `out` must be writable.
 */
enum ParamineStatus paramine_tables_load(const char *const *paths,
                                         size_t n,
                                         struct ParamineTables **out_tables);

/**
 * Counts a `target<TAB>pivot[<TAB>year]` bitext file into a single table.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum ParamineStatus paramine_tables_from_bitext(const char *path,
                                                const char *pivot_lang,
                                                struct ParamineTables **out_tables);

/**
 * Number of pivot corpora in the handle.
 *
 * # Safety
 * `t` must be a live handle or null.
 */
size_t paramine_tables_len(const struct ParamineTables *t);

/**
 * # Safety
 * `t` must come from a `paramine_tables_*` constructor and not be used afterwards.
 */
void paramine_tables_free(struct ParamineTables *t);

/**
 * Scores one pair. Non-sum schemes use the merged table.
 *
 * # Safety
 * `t` must be a live handle; strings NUL-terminated; `out` writable.
 */
enum ParamineStatus paramine_score(const struct ParamineTables *t,
                                   enum ParamineScheme scheme,
                                   const char *e1,
                                   const char *e2,
                                   double *out_score);

/**
 * Enumerates and ranks every candidate pair.
 *
 * # Safety
 * `t` must be a live handle; `out` writable.
 */
enum ParamineStatus paramine_mine(const struct ParamineTables *t,
                                  enum ParamineScheme scheme,
                                  size_t min_support,
                                  struct ParamineRanked **out_ranked);

/**
 * # Safety
 * `r` must be a live handle or null.
 */
size_t paramine_ranked_len(const struct ParamineRanked *r);

/**
 * Reads entry `i` (0-based). The phrase pointers live as long as `r`.
 *
 * # Safety
 * `r` must be a live handle; out pointers writable.
 */
enum ParamineStatus paramine_ranked_get(const struct ParamineRanked *r,
                                        size_t i,
                                        double *out_score,
                                        const char **out_phrase1,
                                        const char **out_phrase2);

/**
 * Writes the list in `ranked.tsv` format.
 *
 * # Safety
 * `r` must be a live handle; `path` NUL-terminated.
 */
enum ParamineStatus paramine_ranked_save(const struct ParamineRanked *r, const char *path);

/**
 * # Safety
 * `r` must come from `paramine_mine` and not be used afterwards.
 */
void paramine_ranked_free(struct ParamineRanked *r);

/**
 * Character edit distance between two normalized sentences.
 *
 * # Safety
 * Strings NUL-terminated; `out` writable.
 */
enum ParamineStatus paramine_levenshtein(const char *a, const char *b, size_t *out_distance);

/**
 * Relative edit-distance filter. Pass `short_cutoff = 0` and negative
 * thresholds to use the defaults (24, 0.4, 0.6).
 *
 * # Safety
 * Strings NUL-terminated; `out` writable.
 */
enum ParamineStatus paramine_edit_filter(const char *a,
                                         const char *b,
                                         size_t short_cutoff,
                                         double base_threshold,
                                         double short_threshold,
                                         bool *out_accept);

/**
 * Merges two annotators' categories.
 */
enum ParamineLabel paramine_adjudicate(enum ParamineCategory a, enum ParamineCategory b);

/**
 * Writes the 24-character hex pair id plus NUL into `buf`.
 *
 * # Safety
 * Strings NUL-terminated; `buf` valid for `len` bytes.
 */
enum ParamineStatus paramine_pair_id(const char *a, const char *b, char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARAMINE_H */
