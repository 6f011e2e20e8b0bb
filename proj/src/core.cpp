#include "hashshare/core.hpp"

#include <numeric>
#include <set>

namespace hashshare {

const char* to_string(AlignmentStatus status) {
  switch (status) {
    case AlignmentStatus::MatchedNaive: return "matched_naive";
    case AlignmentStatus::RepairedPropagate: return "repaired_propagate";
    case AlignmentStatus::RepairedRetokenize: return "repaired_retokenize";
    case AlignmentStatus::RepairedCase: return "repaired_case";
    case AlignmentStatus::RepairedMlm: return "repaired_mlm";
    case AlignmentStatus::Unaligned: return "unaligned";
    case AlignmentStatus::DiscardedAddition: return "discarded_addition";
  }
  return "unknown";
}

std::optional<AlignmentStatus> alignment_status_from_string(const std::string& name) {
  static const std::map<std::string, AlignmentStatus> table = {
      {"matched_naive", AlignmentStatus::MatchedNaive},
      {"repaired_propagate", AlignmentStatus::RepairedPropagate},
      {"repaired_retokenize", AlignmentStatus::RepairedRetokenize},
      {"repaired_case", AlignmentStatus::RepairedCase},
      {"repaired_mlm", AlignmentStatus::RepairedMlm},
      {"unaligned", AlignmentStatus::Unaligned},
      {"discarded_addition", AlignmentStatus::DiscardedAddition},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

namespace {

bool is_lower_hex(const std::string& s) {
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> validate(const HashedCorpus& corpus) {
  std::vector<std::string> errors;
  if (corpus.format_version != 1) {
    errors.push_back("unsupported format_version");
  }
  if (corpus.hash_function != "sha256") {
    errors.push_back("unsupported hash_function");
  }
  if (corpus.hash_length < 1 || corpus.hash_length > 64) {
    errors.push_back("hash_length out of range [1, 64]");
  }
  std::size_t chapter_sum = 0;
  for (std::size_t len : corpus.chapter_lengths) {
    if (len == 0) errors.push_back("zero-length chapter");
    chapter_sum += len;
  }
  if (chapter_sum != corpus.hashes.size()) {
    errors.push_back("chapter lengths do not sum to hash count");
  }
  for (const auto& h : corpus.hashes) {
    if (static_cast<int>(h.size()) != corpus.hash_length || !is_lower_hex(h)) {
      errors.push_back("non-canonical hash");
      break;
    }
  }
  std::set<std::string> names;
  for (const auto& layer : corpus.layers) {
    if (!names.insert(layer.name).second) {
      errors.push_back("duplicate layer name: " + layer.name);
    }
    if (layer.values.size() != corpus.hashes.size()) {
      errors.push_back("layer length mismatch: " + layer.name);
    }
  }
  return errors;
}

std::vector<std::string> validate(const TokenSequence& seq) {
  std::vector<std::string> errors;
  std::size_t chapter_sum = 0;
  for (std::size_t len : seq.chapter_lengths) {
    if (len == 0) errors.push_back("zero-length chapter");
    chapter_sum += len;
  }
  if (chapter_sum != seq.tokens.size()) {
    errors.push_back("chapter lengths do not sum to token count");
  }
  for (const auto& t : seq.tokens) {
    if (t.empty()) {
      errors.push_back("empty token");
      break;
    }
    if (t.find('\n') != std::string::npos || t.find('\r') != std::string::npos) {
      errors.push_back("token contains newline");
      break;
    }
  }
  return errors;
}

}  // namespace hashshare
