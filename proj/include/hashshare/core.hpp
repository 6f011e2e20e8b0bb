#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hashshare {

// Raised when input files or wire data are malformed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a caller-supplied parameter is out of range or inconsistent.
class ParamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// First L lowercase hex characters of a SHA-256 digest.
using TruncatedHash = std::string;

// A tokenized text with its chapter structure. Chapters are stored as token
// counts so the structure survives edits that change the token count.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::vector<std::size_t> chapter_lengths;

  bool operator==(const TokenSequence&) const = default;
};

// One named label per token, e.g. BIO NER tags. Labels are opaque strings.
struct AnnotationLayer {
  std::string name;
  std::vector<std::string> values;

  bool operator==(const AnnotationLayer&) const = default;
};

// The shareable artifact: truncated token hashes plus annotation layers.
// Holds no plain-text token anywhere.
struct HashedCorpus {
  int format_version = 1;
  std::string hash_function = "sha256";
  int hash_length = 2;
  std::vector<TruncatedHash> hashes;
  std::vector<std::size_t> chapter_lengths;
  std::vector<AnnotationLayer> layers;  // kept sorted by name

  bool operator==(const HashedCorpus&) const = default;
};

enum class AlignmentStatus {
  MatchedNaive,
  RepairedPropagate,
  RepairedRetokenize,
  RepairedCase,
  RepairedMlm,
  Unaligned,
  DiscardedAddition,
};

const char* to_string(AlignmentStatus status);
std::optional<AlignmentStatus> alignment_status_from_string(const std::string& name);

// Half-open range over the original user token indices.
using UserSpan = std::pair<std::size_t, std::size_t>;

struct AlignmentRecord {
  std::string token;
  AlignmentStatus status = AlignmentStatus::MatchedNaive;
  std::optional<std::size_t> creator_index;
  std::map<std::string, std::string> annotations;
  std::optional<UserSpan> user_span;

  bool operator==(const AlignmentRecord&) const = default;
};

struct AlignmentResult {
  std::vector<AlignmentRecord> records;
  std::map<AlignmentStatus, std::size_t> summary;
  std::vector<std::string> warnings;

  std::size_t count(AlignmentStatus status) const {
    auto it = summary.find(status);
    return it == summary.end() ? 0 : it->second;
  }

  bool operator==(const AlignmentResult& other) const {
    return records == other.records && summary == other.summary;
  }
};

// Returns every invariant violation found, empty if the corpus is valid.
std::vector<std::string> validate(const HashedCorpus& corpus);

// Returns every invariant violation found, empty if the sequence is valid.
std::vector<std::string> validate(const TokenSequence& seq);

}  // namespace hashshare
