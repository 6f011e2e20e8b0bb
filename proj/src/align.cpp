#include "hashshare/align.hpp"

#include <span>

#include "hashshare/hashing.hpp"
#include "hashshare/matcher.hpp"

namespace hashshare {

namespace {

// Aligns one creator/user chunk and appends the resulting slots.
void align_chunk(AlignmentState& state, SequenceMatcher<TruncatedHash>& matcher,
                 std::span<const TruncatedHash> creator_hashes, std::size_t creator_offset,
                 std::span<const TruncatedHash> user_hashes, std::size_t user_offset,
                 bool autojunk) {
  matcher.reset(creator_hashes, user_hashes, autojunk);
  for (const OpCode& op : matcher.opcodes()) {
    switch (op.tag) {
      case OpTag::Equal:
        for (std::size_t t = 0; t < op.a_end - op.a_begin; ++t) {
          Slot slot;
          slot.kind = Slot::Kind::Matched;
          slot.creator_index = creator_offset + op.a_begin + t;
          slot.user_index = user_offset + op.b_begin + t;
          state.slots.push_back(slot);
        }
        break;
      case OpTag::Insert:
        for (std::size_t j = op.b_begin; j < op.b_end; ++j) {
          Slot slot;
          slot.kind = Slot::Kind::Addition;
          slot.user_index = user_offset + j;
          state.slots.push_back(slot);
        }
        break;
      case OpTag::Delete:
        for (std::size_t i = op.a_begin; i < op.a_end; ++i) {
          Slot slot;
          slot.kind = Slot::Kind::Pending;
          slot.creator_index = creator_offset + i;
          state.slots.push_back(slot);
          ++state.pending_count;
        }
        break;
      case OpTag::Replace: {
        // Pair positions left to right; leftover creator positions become
        // deletions, leftover user positions become additions.
        const std::size_t a_len = op.a_end - op.a_begin;
        const std::size_t b_len = op.b_end - op.b_begin;
        const std::size_t paired = std::min(a_len, b_len);
        for (std::size_t t = 0; t < paired; ++t) {
          Slot slot;
          slot.kind = Slot::Kind::Pending;
          slot.creator_index = creator_offset + op.a_begin + t;
          slot.user_index = user_offset + op.b_begin + t;
          state.slots.push_back(slot);
          ++state.pending_count;
        }
        for (std::size_t t = paired; t < a_len; ++t) {
          Slot slot;
          slot.kind = Slot::Kind::Pending;
          slot.creator_index = creator_offset + op.a_begin + t;
          state.slots.push_back(slot);
          ++state.pending_count;
        }
        for (std::size_t t = paired; t < b_len; ++t) {
          Slot slot;
          slot.kind = Slot::Kind::Addition;
          slot.user_index = user_offset + op.b_begin + t;
          state.slots.push_back(slot);
        }
        break;
      }
    }
  }
}

}  // namespace

AlignmentState align_naive(const HashedCorpus& creator, const TokenSequence& user,
                           bool autojunk) {
  if (auto errors = validate(creator); !errors.empty()) {
    throw ParamError("invalid creator corpus: " + errors.front());
  }
  if (auto errors = validate(user); !errors.empty()) {
    throw ParamError("invalid user sequence: " + errors.front());
  }

  AlignmentState state;
  state.creator = &creator;
  state.user = user;
  state.user_hashes.reserve(user.tokens.size());
  TokenHasher hasher(creator.hash_length);
  for (const auto& token : user.tokens) {
    state.user_hashes.push_back(hasher(token));
  }

  SequenceMatcher<TruncatedHash> matcher;
  const bool chapter_wise = !creator.chapter_lengths.empty() &&
                            creator.chapter_lengths.size() == user.chapter_lengths.size();
  if (chapter_wise) {
    std::size_t creator_offset = 0, user_offset = 0;
    for (std::size_t c = 0; c < creator.chapter_lengths.size(); ++c) {
      const std::size_t creator_len = creator.chapter_lengths[c];
      const std::size_t user_len = user.chapter_lengths[c];
      align_chunk(state, matcher,
                  std::span(creator.hashes).subspan(creator_offset, creator_len),
                  creator_offset,
                  std::span(state.user_hashes).subspan(user_offset, user_len),
                  user_offset, autojunk);
      creator_offset += creator_len;
      user_offset += user_len;
    }
  } else {
    align_chunk(state, matcher, creator.hashes, 0, state.user_hashes, 0, autojunk);
  }
  return state;
}

AlignmentResult finalize(const AlignmentState& state) {
  AlignmentResult result;
  for (auto status :
       {AlignmentStatus::MatchedNaive, AlignmentStatus::RepairedPropagate,
        AlignmentStatus::RepairedRetokenize, AlignmentStatus::RepairedCase,
        AlignmentStatus::RepairedMlm, AlignmentStatus::Unaligned,
        AlignmentStatus::DiscardedAddition}) {
    result.summary[status] = 0;
  }
  result.warnings = state.warnings;

  const auto& layers = state.creator->layers;
  auto annotations_at = [&](std::size_t creator_index) {
    std::map<std::string, std::string> annotations;
    for (const auto& layer : layers) {
      annotations.emplace(layer.name, layer.values[creator_index]);
    }
    return annotations;
  };

  for (const Slot& slot : state.slots) {
    switch (slot.kind) {
      case Slot::Kind::Matched: {
        AlignmentRecord rec;
        rec.token = state.user_token(*slot.user_index);
        rec.status = AlignmentStatus::MatchedNaive;
        rec.creator_index = slot.creator_index;
        rec.annotations = annotations_at(*slot.creator_index);
        rec.user_span = UserSpan{*slot.user_index, *slot.user_index + 1};
        result.records.push_back(std::move(rec));
        ++result.summary[AlignmentStatus::MatchedNaive];
        break;
      }
      case Slot::Kind::Repaired: {
        AlignmentRecord rec;
        rec.token = slot.token;
        rec.status = slot.status;
        rec.creator_index = slot.creator_index;
        rec.annotations = annotations_at(*slot.creator_index);
        rec.user_span = slot.user_span;
        result.records.push_back(std::move(rec));
        ++result.summary[slot.status];
        break;
      }
      case Slot::Kind::Addition: {
        AlignmentRecord rec;
        rec.token = state.user_token(*slot.user_index);
        rec.status = AlignmentStatus::DiscardedAddition;
        rec.user_span = UserSpan{*slot.user_index, *slot.user_index + 1};
        result.records.push_back(std::move(rec));
        ++result.summary[AlignmentStatus::DiscardedAddition];
        break;
      }
      case Slot::Kind::Pending:
        ++result.summary[AlignmentStatus::Unaligned];
        break;
    }
  }
  return result;
}

}  // namespace hashshare
