#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hashshare/align.hpp"
#include "hashshare/predictor.hpp"

namespace hashshare {

enum class CaseTransform {
  Lowercase,
  CapitalizeFirst,
  Uppercase,
  SwapFirst,
};

struct StrategyConfig {
  std::vector<std::string> pipeline = {"retokenize", "mlm", "case", "propagate"};
  int mlm_window = 32;
  int mlm_top_k = 10;
  std::vector<CaseTransform> case_variants = {
      CaseTransform::Lowercase, CaseTransform::CapitalizeFirst,
      CaseTransform::Uppercase, CaseTransform::SwapFirst};
  std::uint64_t seed = 0;
};

// ASCII-only casing transform; non-ASCII bytes pass through unchanged.
std::string apply_case_transform(const std::string& token, CaseTransform transform);

// Majority vote over user tokens already aligned to other creator positions
// carrying the same hash. Iterated to a fixed point.
void apply_propagate(AlignmentState& state);

// Split one user token against consecutive pending creator hashes (also
// trying to drop a single non-alphanumeric separator at each split point),
// and merge consecutive unmatched user tokens against one pending hash.
void apply_retokenize(AlignmentState& state);

void apply_case(AlignmentState& state,
                const std::vector<CaseTransform>& variants = StrategyConfig{}.case_variants);

// Masked-token prediction over already-resolved output context only.
void apply_mlm(AlignmentState& state, MaskPredictor& predictor, int window = 32,
               int top_k = 10);

// Applies the configured strategies in order. Throws ParamError on an
// unknown strategy name.
void apply_pipe(AlignmentState& state, const StrategyConfig& config,
                MaskPredictor* predictor);

// Full driver: naive alignment followed by the named strategy
// ("naive", "propagate", "retokenize", "case", "mlm" or "pipe").
AlignmentResult align_with_strategy(const HashedCorpus& creator, const TokenSequence& user,
                                    const std::string& strategy,
                                    const StrategyConfig& config = {},
                                    MaskPredictor* predictor = nullptr);

bool is_known_strategy(const std::string& name);

}  // namespace hashshare
