#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hashshare/core.hpp"
#include "hashshare/corrupt.hpp"

namespace hashshare {

// The creator-index -> user-index correspondence used to score alignments,
// plus the original creator tokens where they are known (needed to judge
// repaired output). Both index sides are strictly increasing.
struct GroundTruth {
  std::vector<std::optional<std::size_t>> user_index;       // size = creator length
  std::vector<std::optional<std::string>> original_token;   // size = creator length

  std::size_t mapped_count() const {
    std::size_t n = 0;
    for (const auto& u : user_index) n += u.has_value();
    return n;
  }
};

// Derives the surviving index correspondence from a corruption log.
// Deleted originals are unmapped; split tokens map to the span's first part;
// merged pairs map their first token to the merged result.
GroundTruth ground_truth_from_log(const CorruptionLog& log, std::size_t original_len);

// Exact ground truth when the original text is at hand: the log mapping plus
// every original token.
GroundTruth ground_truth_from_log(const CorruptionLog& log, const TokenSequence& original);

// Identity ground truth (user text == creator text).
GroundTruth identity_ground_truth(const TokenSequence& creator);

// Best-effort ground truth for two real texts via plain-token gestalt
// alignment of the token sequences themselves.
GroundTruth ground_truth_from_texts(const TokenSequence& creator, const TokenSequence& user);

struct TokenErrorReport {
  double error_pct = 0.0;
  std::size_t false_positives = 0;
  std::size_t mapped = 0;
  std::size_t errors = 0;
};

// A gt-mapped creator index errs when its annotation is missing, delivered
// away from the gt position, or delivered on a wrongly reconstructed token.
// A false positive is a repaired record whose output token differs from the
// true creator token, where that token is known.
TokenErrorReport token_error_rate(const AlignmentResult& result, const GroundTruth& gt);

enum class EntityMode { Strict, Lenient };

// BIO entity error percentage over the creator layer. Strict: an entity errs
// if any of its tokens errs; lenient: only if all of them err.
double entity_error_rate(const AlignmentResult& result, const GroundTruth& gt,
                         const AnnotationLayer& layer, EntityMode mode,
                         std::vector<std::string>* warnings = nullptr);

struct EvalRow {
  CorruptionSpec spec;
  int hash_length = 2;
  std::string strategy;
  double token_error_pct = 0.0;
  std::size_t false_positives = 0;
  double entity_strict_pct = 0.0;
  double entity_lenient_pct = 0.0;
  double runtime_s = 0.0;
};

// Full cross-product of specs x lengths x strategies x seeds on one creator
// text. The builtin frequency predictor backs the mlm strategy. Rows come
// back in deterministic grid order regardless of the job count.
std::vector<EvalRow> sweep(const TokenSequence& creator,
                           const std::vector<AnnotationLayer>& layers,
                           const std::vector<CorruptionSpec>& specs,
                           const std::vector<int>& hash_lengths,
                           const std::vector<std::string>& strategies,
                           const std::vector<std::uint64_t>& seeds, int jobs = 1);

// CSV with the fixed header
// kind,ratio,wer,cer,hash_length,strategy,seed,token_error_pct,
// false_positives,entity_strict_pct,entity_lenient_pct,runtime_s
std::string sweep_to_csv(const std::vector<EvalRow>& rows);

}  // namespace hashshare
