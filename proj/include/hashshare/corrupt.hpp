#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hashshare/core.hpp"

namespace hashshare {

enum class CorruptionKind {
  Add,
  Substitute,
  Delete,
  TokensSplit,
  TokensMerge,
  OcrScramble,
};

const char* to_string(CorruptionKind kind);
std::optional<CorruptionKind> corruption_kind_from_string(const std::string& name);

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::Substitute;
  double ratio = 0.0;        // all kinds except ocr_scramble
  double wer_target = 0.0;   // ocr_scramble only
  double cer_target = 0.0;   // ocr_scramble only
  std::uint64_t seed = 0;
};

// One edit, expressed against the sequence as it was when the edit was
// applied: remove `original` at `position`, insert `replacement` there.
struct EditRecord {
  CorruptionKind kind = CorruptionKind::Substitute;
  std::size_t position = 0;
  std::vector<std::string> original;
  std::vector<std::string> replacement;

  bool operator==(const EditRecord&) const = default;
};

struct CorruptionLog {
  CorruptionSpec spec;
  std::size_t original_token_count = 0;
  double achieved_wer = 0.0;
  double achieved_cer = 0.0;
  std::vector<EditRecord> records;
};

// Applies the spec's synthetic degradation; deterministic given the seed.
// Ratio kinds perform exactly floor(len * ratio) edits.
std::pair<TokenSequence, CorruptionLog> corrupt(const TokenSequence& seq,
                                                const CorruptionSpec& spec);

// OCR-style character noise calibrated to (WER, CER) targets.
std::pair<TokenSequence, CorruptionLog> ocr_scramble(const TokenSequence& seq,
                                                     double wer_target, double cer_target,
                                                     std::uint64_t seed);

// WER = token edit distance / original token count;
// CER = character edit distance over space-joined text / original char count.
// Computed chapter by chapter when the chapter counts agree.
std::pair<double, double> measure_wer_cer(const TokenSequence& original,
                                          const TokenSequence& corrupted);

// Re-applies a log to the original sequence; throws ParseError when a record
// does not match the text it claims to edit.
TokenSequence replay(const TokenSequence& original, const CorruptionLog& log);

}  // namespace hashshare
