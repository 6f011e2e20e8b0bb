#include "hashshare/repair.hpp"

#include <cctype>
#include <map>
#include <unordered_map>

#include "hashshare/hashing.hpp"

namespace hashshare {

namespace {

// Cost control: split enumeration is combinatorial in the part count.
constexpr std::size_t kMaxSplitParts = 4;
// Merge window over consecutive user tokens.
constexpr std::size_t kMaxMergeTokens = 3;

bool is_ascii_alnum(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Enumerates ordered decompositions of `token` into hashes.size() non-empty
// parts, scanning split points left to right. At each split point the
// character under the cut may additionally be dropped when it is not
// alphanumeric (handles "runner-up" -> "runner", "up"). First match wins.
bool try_split(const std::string& token, const std::vector<const TruncatedHash*>& hashes,
               std::size_t pos, std::size_t part_index, TokenHasher& hasher,
               std::vector<std::string>& parts) {
  const std::size_t k = hashes.size();
  if (part_index == k - 1) {
    if (pos >= token.size()) return false;
    std::string part = token.substr(pos);
    if (hasher(part) != *hashes[part_index]) return false;
    parts.push_back(std::move(part));
    return true;
  }
  for (std::size_t cut = pos + 1; cut < token.size(); ++cut) {
    std::string part = token.substr(pos, cut - pos);
    if (hasher(part) != *hashes[part_index]) continue;
    parts.push_back(std::move(part));
    if (try_split(token, hashes, cut, part_index + 1, hasher, parts)) return true;
    if (!is_ascii_alnum(token[cut]) && cut + 1 < token.size() &&
        try_split(token, hashes, cut + 1, part_index + 1, hasher, parts)) {
      return true;
    }
    parts.pop_back();
  }
  return false;
}

void resolve(AlignmentState& state, Slot& slot, std::string token,
             AlignmentStatus status, std::optional<UserSpan> span) {
  slot.kind = Slot::Kind::Repaired;
  slot.token = std::move(token);
  slot.status = status;
  slot.user_span = span;
  --state.pending_count;
}

}  // namespace

std::string apply_case_transform(const std::string& token, CaseTransform transform) {
  std::string out = token;
  auto lower = [](char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  };
  auto upper = [](char c) {
    return static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  };
  switch (transform) {
    case CaseTransform::Lowercase:
      for (char& c : out) c = lower(c);
      break;
    case CaseTransform::Uppercase:
      for (char& c : out) c = upper(c);
      break;
    case CaseTransform::CapitalizeFirst:
      if (!out.empty()) out[0] = upper(out[0]);
      break;
    case CaseTransform::SwapFirst:
      if (!out.empty()) {
        char c = out[0];
        out[0] = std::islower(static_cast<unsigned char>(c)) ? upper(c) : lower(c);
      }
      break;
  }
  return out;
}

void apply_propagate(AlignmentState& state) {
  bool changed = true;
  while (changed && state.pending_count > 0) {
    changed = false;
    // Votes per creator hash: user tokens already aligned to that hash.
    std::unordered_map<std::string, std::map<std::string, std::size_t>> votes;
    for (const Slot& slot : state.slots) {
      if (slot.kind == Slot::Kind::Matched) {
        ++votes[state.creator_hash(*slot.creator_index)][state.user_token(*slot.user_index)];
      } else if (slot.kind == Slot::Kind::Repaired) {
        ++votes[state.creator_hash(*slot.creator_index)][slot.token];
      }
    }
    for (Slot& slot : state.slots) {
      if (slot.kind != Slot::Kind::Pending) continue;
      auto it = votes.find(state.creator_hash(*slot.creator_index));
      if (it == votes.end() || it->second.empty()) continue;
      // Majority token; ties broken by highest count then smallest token
      // (map iteration is ordered, strict > keeps the first).
      const std::string* winner = nullptr;
      std::size_t best = 0;
      for (const auto& [token, count] : it->second) {
        if (count > best) {
          best = count;
          winner = &token;
        }
      }
      std::optional<UserSpan> span;
      if (slot.user_index) span = UserSpan{*slot.user_index, *slot.user_index + 1};
      resolve(state, slot, *winner, AlignmentStatus::RepairedPropagate, span);
      changed = true;
    }
  }
}

void apply_retokenize(AlignmentState& state) {
  TokenHasher hasher(state.creator->hash_length);
  auto& slots = state.slots;
  std::vector<char> consumed(slots.size(), 0);

  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].kind != Slot::Kind::Pending) continue;

    // Split: one user token against this substitution's hash plus the
    // immediately following pending deletions.
    if (slots[i].is_pending_substitution()) {
      std::size_t deletions = 0;
      while (i + 1 + deletions < slots.size() &&
             slots[i + 1 + deletions].is_pending_deletion()) {
        ++deletions;
      }
      const std::string& user_tok = state.user_token(*slots[i].user_index);
      bool split_done = false;
      for (std::size_t k = 2; k <= std::min(1 + deletions, kMaxSplitParts); ++k) {
        std::vector<const TruncatedHash*> hashes;
        for (std::size_t t = 0; t < k; ++t) {
          hashes.push_back(&state.creator_hash(*slots[i + t].creator_index));
        }
        std::vector<std::string> parts;
        if (!try_split(user_tok, hashes, 0, 0, hasher, parts)) continue;
        const std::size_t u = *slots[i].user_index;
        for (std::size_t t = 0; t < k; ++t) {
          // The first part carries the span over the split user token; the
          // remaining parts get empty spans so that spans still tile.
          UserSpan span = t == 0 ? UserSpan{u, u + 1} : UserSpan{u + 1, u + 1};
          resolve(state, slots[i + t], parts[t], AlignmentStatus::RepairedRetokenize, span);
        }
        i += k - 1;
        split_done = true;
        break;
      }
      if (split_done) continue;
    }

    // Merge: this pending hash against consecutive unmatched user tokens
    // (the substitution's own token plus following additions, or at a
    // deletion site the following additions alone).
    std::vector<std::size_t> addition_slots;
    std::vector<std::size_t> user_indices;
    std::string merged;
    if (slots[i].is_pending_substitution()) {
      user_indices.push_back(*slots[i].user_index);
      merged = state.user_token(*slots[i].user_index);
    }
    std::size_t next = i + 1;
    bool merged_done = false;
    while (user_indices.size() < kMaxMergeTokens && next < slots.size() &&
           slots[next].kind == Slot::Kind::Addition && !consumed[next]) {
      const std::size_t u = *slots[next].user_index;
      if (!user_indices.empty() && u != user_indices.back() + 1) break;
      user_indices.push_back(u);
      merged += state.user_token(u);
      addition_slots.push_back(next);
      ++next;
      if (user_indices.size() < 2) continue;
      if (hasher(merged) == state.creator_hash(*slots[i].creator_index)) {
        UserSpan span{user_indices.front(), user_indices.back() + 1};
        resolve(state, slots[i], merged, AlignmentStatus::RepairedRetokenize, span);
        for (std::size_t s : addition_slots) consumed[s] = 1;
        merged_done = true;
        break;
      }
    }
    (void)merged_done;
  }

  // Drop additions swallowed by merges.
  std::vector<Slot> kept;
  kept.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!consumed[i]) kept.push_back(std::move(slots[i]));
  }
  slots.swap(kept);
}

void apply_case(AlignmentState& state, const std::vector<CaseTransform>& variants) {
  TokenHasher hasher(state.creator->hash_length);
  for (Slot& slot : state.slots) {
    if (!slot.is_pending_substitution()) continue;
    const std::string& user_tok = state.user_token(*slot.user_index);
    for (CaseTransform transform : variants) {
      std::string variant = apply_case_transform(user_tok, transform);
      if (variant == user_tok) continue;
      if (hasher(variant) != state.creator_hash(*slot.creator_index)) continue;
      resolve(state, slot, std::move(variant), AlignmentStatus::RepairedCase,
              UserSpan{*slot.user_index, *slot.user_index + 1});
      break;
    }
  }
}

void apply_mlm(AlignmentState& state, MaskPredictor& predictor, int window, int top_k) {
  if (window < 2) throw ParamError("mlm window must be >= 2");
  if (top_k < 1) throw ParamError("mlm top_k must be >= 1");
  TokenHasher hasher(state.creator->hash_length);
  const std::size_t half = static_cast<std::size_t>(window) / 2;
  auto& slots = state.slots;

  auto resolved_token = [&](const Slot& slot) -> const std::string* {
    if (slot.kind == Slot::Kind::Matched) return &state.user_token(*slot.user_index);
    if (slot.kind == Slot::Kind::Repaired) return &slot.token;
    return nullptr;
  };

  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].kind != Slot::Kind::Pending) continue;

    std::vector<std::string> left, right;
    for (std::size_t j = i; j > 0 && left.size() < half;) {
      --j;
      if (const std::string* tok = resolved_token(slots[j])) left.push_back(*tok);
    }
    std::reverse(left.begin(), left.end());
    for (std::size_t j = i + 1; j < slots.size() && right.size() < half; ++j) {
      if (const std::string* tok = resolved_token(slots[j])) right.push_back(*tok);
    }

    auto candidates = predictor.predict(left, right, top_k);
    for (auto& warning : predictor.take_warnings()) {
      state.warnings.push_back("mlm: " + std::move(warning));
    }
    for (const MaskCandidate& candidate : candidates) {
      if (candidate.token.empty()) continue;
      if (hasher(candidate.token) != state.creator_hash(*slots[i].creator_index)) continue;
      std::optional<UserSpan> span;
      if (slots[i].user_index) {
        span = UserSpan{*slots[i].user_index, *slots[i].user_index + 1};
      } else {
        // Deletion site: empty span at the next user position keeps spans
        // ordered without claiming any user token.
        std::size_t next_user = state.user.tokens.size();
        for (std::size_t j = i + 1; j < slots.size(); ++j) {
          if (slots[j].user_index) {
            next_user = *slots[j].user_index;
            break;
          }
        }
        span = UserSpan{next_user, next_user};
      }
      resolve(state, slots[i], candidate.token, AlignmentStatus::RepairedMlm, span);
      break;
    }
  }
}

void apply_pipe(AlignmentState& state, const StrategyConfig& config,
                MaskPredictor* predictor) {
  if (config.pipeline.empty()) throw ParamError("empty strategy pipeline");
  for (const std::string& name : config.pipeline) {
    if (name == "propagate") {
      apply_propagate(state);
    } else if (name == "retokenize") {
      apply_retokenize(state);
    } else if (name == "case") {
      apply_case(state, config.case_variants);
    } else if (name == "mlm") {
      if (predictor) {
        apply_mlm(state, *predictor, config.mlm_window, config.mlm_top_k);
      } else {
        state.warnings.push_back("mlm strategy skipped: no predictor configured");
      }
    } else {
      throw ParamError("unknown strategy in pipeline: " + name);
    }
  }
}

bool is_known_strategy(const std::string& name) {
  return name == "naive" || name == "propagate" || name == "retokenize" ||
         name == "case" || name == "mlm" || name == "pipe";
}

AlignmentResult align_with_strategy(const HashedCorpus& creator, const TokenSequence& user,
                                    const std::string& strategy,
                                    const StrategyConfig& config,
                                    MaskPredictor* predictor) {
  AlignmentState state = align_naive(creator, user);
  if (strategy == "naive") {
    // nothing to repair
  } else if (strategy == "pipe") {
    apply_pipe(state, config, predictor);
  } else if (is_known_strategy(strategy)) {
    StrategyConfig single = config;
    single.pipeline = {strategy};
    apply_pipe(state, single, predictor);
  } else {
    throw ParamError("unknown strategy: " + strategy);
  }
  return finalize(state);
}

}  // namespace hashshare
