/* C interface to the hashshare library.
 *
 * All functions return a status code: 0 ok, 2 input parse error, 3 parameter
 * error, 4 internal error (accessors returning values directly are exempt).
 * On failure hs_last_error() describes the problem for the calling thread.
 * Handles are opaque and must be released with the matching _free function.
 */
#ifndef HASHSHARE_H
#define HASHSHARE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  HS_OK = 0,
  HS_ERR_PARSE = 2,
  HS_ERR_PARAM = 3,
  HS_ERR_INTERNAL = 4,
};

typedef struct hs_tokens hs_tokens;       /* token sequence + annotation layers */
typedef struct hs_corpus hs_corpus;       /* shared hashed corpus */
typedef struct hs_alignment hs_alignment; /* alignment result */

/* Message for the last failure on this thread; empty string if none. */
const char* hs_last_error(void);

/* --- token sequences ------------------------------------------------- */

/* format: "lines" or "columns". */
int hs_tokens_read(const char* path, const char* format, hs_tokens** out);
int hs_tokens_write(const hs_tokens* tokens, const char* path, const char* format);
void hs_tokens_free(hs_tokens* tokens);
size_t hs_tokens_count(const hs_tokens* tokens);
size_t hs_tokens_chapter_count(const hs_tokens* tokens);

/* --- shared corpus --------------------------------------------------- */

int hs_corpus_build(const hs_tokens* tokens, int hash_length, hs_corpus** out);
int hs_corpus_read(const char* path, hs_corpus** out);
int hs_corpus_write(const hs_corpus* corpus, const char* path);
void hs_corpus_free(hs_corpus* corpus);
int hs_corpus_hash_length(const hs_corpus* corpus);
size_t hs_corpus_size(const hs_corpus* corpus);

/* Writes the first hash_length hex chars of SHA-256(token) into buf
 * (capacity >= hash_length + 1, NUL-terminated). */
int hs_hash_token(const char* token, int hash_length, char* buf, size_t buf_size);

/* Mean number of colliding token types per distinct type at this length. */
int hs_collision_mean(const hs_tokens* tokens, int hash_length, double* out_mean);

/* --- alignment ------------------------------------------------------- */

/* strategy: naive | propagate | retokenize | case | mlm | pipe.
 * predictor: NULL or "" for none, "builtin", "exec:CMD", or "http:URL". */
int hs_align(const hs_corpus* corpus, const hs_tokens* tokens, const char* strategy,
             const char* predictor, int mlm_window, int mlm_top_k, uint64_t seed,
             hs_alignment** out);
void hs_alignment_free(hs_alignment* alignment);
/* status: matched_naive | repaired_* | unaligned | discarded_addition. */
int hs_alignment_count(const hs_alignment* alignment, const char* status, size_t* out_count);
size_t hs_alignment_record_count(const hs_alignment* alignment);
size_t hs_alignment_warning_count(const hs_alignment* alignment);
const char* hs_alignment_warning(const hs_alignment* alignment, size_t index);
int hs_alignment_write_report(const hs_alignment* alignment, const char* path);

/* --- corruption ------------------------------------------------------ */

/* kind: add | substitute | delete | tokens_split | tokens_merge | ocr_scramble.
 * ratio drives the token kinds; wer/cer drive ocr_scramble. The corrupted
 * text goes to out_path (in `format`), the edit log to log_path; either path
 * may be NULL to skip. Achieved rates are returned when pointers are given. */
int hs_corrupt(const hs_tokens* tokens, const char* kind, double ratio, double wer,
               double cer, uint64_t seed, const char* format, const char* out_path,
               const char* log_path, double* out_wer, double* out_cer);

/* --- evaluation ------------------------------------------------------ */

typedef struct {
  double token_error_pct;
  uint64_t false_positives;
  uint64_t mapped;
  uint64_t errors;
  double entity_strict_pct;  /* -1 when no layer was evaluated */
  double entity_lenient_pct; /* -1 when no layer was evaluated */
} hs_eval_result;

/* Scores a written alignment report against a corruption log.
 * tokens_path (original text) refines the ground truth; shared_path + layer
 * enable the entity metrics; all three may be NULL. */
int hs_eval(const char* report_path, const char* log_path, const char* tokens_path,
            const char* tokens_format, const char* shared_path, const char* layer,
            hs_eval_result* out);

/* --- benchmarking ---------------------------------------------------- */

/* Runs the corruption/alignment grid from grid_path (JSON) over the text at
 * tokens_path and writes the CSV to csv_path. jobs <= 0 means one worker per
 * logical CPU. */
int hs_bench(const char* tokens_path, const char* format, const char* grid_path,
             const char* csv_path, int jobs);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HASHSHARE_H */
