#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hashshare/core.hpp"

namespace hashshare {

// One position of the in-progress alignment, in output order.
struct Slot {
  enum class Kind {
    Matched,    // creator hash matched a user token exactly
    Pending,    // creator hash not yet resolved (deletion or substitution)
    Addition,   // superfluous user token, will be discarded
    Repaired,   // resolved by a repair strategy
  };

  Kind kind = Kind::Pending;
  std::optional<std::size_t> creator_index;
  // For Matched, Addition and Pending-substitution: the user token index.
  // Absent on Pending means a deletion site.
  std::optional<std::size_t> user_index;

  // Repaired only.
  std::string token;
  AlignmentStatus status = AlignmentStatus::Unaligned;
  std::optional<UserSpan> user_span;

  bool is_pending_substitution() const {
    return kind == Kind::Pending && user_index.has_value();
  }
  bool is_pending_deletion() const {
    return kind == Kind::Pending && !user_index.has_value();
  }
};

struct AlignmentState {
  const HashedCorpus* creator = nullptr;
  TokenSequence user;
  std::vector<TruncatedHash> user_hashes;
  std::vector<Slot> slots;
  std::size_t pending_count = 0;
  std::vector<std::string> warnings;

  const std::string& user_token(std::size_t index) const { return user.tokens[index]; }
  const TruncatedHash& creator_hash(std::size_t index) const {
    return creator->hashes[index];
  }
};

// Exact-match hash alignment. When creator and user expose the same number
// of chapters, each chapter pair is aligned independently and the results
// concatenated; otherwise the full sequences are aligned as single units.
AlignmentState align_naive(const HashedCorpus& creator, const TokenSequence& user,
                           bool autojunk = false);

// Turns the state into the final result. Still-pending creator indices yield
// no output record; they are counted as unaligned in the summary.
AlignmentResult finalize(const AlignmentState& state);

}  // namespace hashshare
