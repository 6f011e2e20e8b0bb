#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hashshare {

// Longest contiguous common block; a[a_start .. a_start+size) equals
// b[b_start .. b_start+size) element-wise.
struct MatchBlock {
  std::size_t a_start = 0;
  std::size_t b_start = 0;
  std::size_t size = 0;

  bool operator==(const MatchBlock&) const = default;
};

enum class OpTag { Equal, Replace, Delete, Insert };

inline const char* to_string(OpTag tag) {
  switch (tag) {
    case OpTag::Equal: return "equal";
    case OpTag::Replace: return "replace";
    case OpTag::Delete: return "delete";
    case OpTag::Insert: return "insert";
  }
  return "unknown";
}

// Edit-script view of the matching blocks. Opcodes tile both sequences
// completely and in order.
struct OpCode {
  OpTag tag = OpTag::Equal;
  std::size_t a_begin = 0, a_end = 0;
  std::size_t b_begin = 0, b_end = 0;

  bool operator==(const OpCode&) const = default;
};

// Ratcliff-Obershelp style sequence matcher: recursively takes the longest
// contiguous common block (ties broken by smallest a_start, then smallest
// b_start) and recurses on both sides.
//
// The popularity heuristic (elements occurring in more than 1% of a long b
// sequence skipped during matching) is off by default: truncated hashes are
// deliberately high-frequency and the heuristic degrades their alignment.
template <typename T>
class SequenceMatcher {
 public:
  SequenceMatcher() = default;
  SequenceMatcher(std::span<const T> a, std::span<const T> b, bool autojunk = false) {
    reset(a, b, autojunk);
  }

  // Reuses internal buffers; cheaper than constructing anew in tight loops.
  void reset(std::span<const T> a, std::span<const T> b, bool autojunk = false) {
    a_ = a;
    b_ = b;
    ids_.clear();
    a_ids_.clear();
    b_ids_.clear();
    a_ids_.reserve(a.size());
    b_ids_.reserve(b.size());
    for (const T& e : a) a_ids_.push_back(intern(e));
    for (const T& e : b) b_ids_.push_back(intern(e));

    buckets_.assign(ids_.size(), {});
    for (std::size_t j = 0; j < b_ids_.size(); ++j) {
      buckets_[b_ids_[j]].push_back(j);
    }
    popular_.assign(ids_.size(), false);
    if (autojunk && b.size() >= 200) {
      const std::size_t threshold = b.size() / 100 + 1;
      for (std::size_t id = 0; id < buckets_.size(); ++id) {
        if (buckets_[id].size() > threshold) {
          popular_[id] = true;
          buckets_[id].clear();
        }
      }
    }
    run_.assign(b.size() + 1, 0);
    new_run_.assign(b.size() + 1, 0);
  }

  MatchBlock find_longest_match(std::size_t a_lo, std::size_t a_hi,
                                std::size_t b_lo, std::size_t b_hi) {
    std::size_t best_i = a_lo, best_j = b_lo, best_size = 0;

    touched_.clear();
    for (std::size_t i = a_lo; i < a_hi; ++i) {
      const auto& bucket = buckets_[a_ids_[i]];
      new_touched_.clear();
      auto it = std::lower_bound(bucket.begin(), bucket.end(), b_lo);
      for (; it != bucket.end() && *it < b_hi; ++it) {
        const std::size_t j = *it;
        const std::size_t k = (j > b_lo ? run_[j - 1] : 0) + 1;
        new_run_[j] = k;
        new_touched_.push_back(j);
        if (k > best_size) {
          best_i = i + 1 - k;
          best_j = j + 1 - k;
          best_size = k;
        }
      }
      for (std::size_t j : touched_) run_[j] = 0;
      for (std::size_t j : new_touched_) run_[j] = new_run_[j];
      touched_.swap(new_touched_);
    }
    for (std::size_t j : touched_) run_[j] = 0;

    // Extend over non-popular, then popular neighbours (mirrors the classic
    // two-phase extension; both are no-ops when the heuristic is off).
    for (int phase = 0; phase < 2; ++phase) {
      const bool want_popular = phase == 1;
      while (best_i > a_lo && best_j > b_lo &&
             popular_[b_ids_[best_j - 1]] == want_popular &&
             a_ids_[best_i - 1] == b_ids_[best_j - 1]) {
        --best_i;
        --best_j;
        ++best_size;
      }
      while (best_i + best_size < a_hi && best_j + best_size < b_hi &&
             popular_[b_ids_[best_j + best_size]] == want_popular &&
             a_ids_[best_i + best_size] == b_ids_[best_j + best_size]) {
        ++best_size;
      }
    }
    return {best_i, best_j, best_size};
  }

  // All matching blocks in order, terminated by a zero-size sentinel at
  // (len(a), len(b)).
  std::vector<MatchBlock> matching_blocks() {
    std::vector<MatchBlock> blocks;
    std::vector<std::array<std::size_t, 4>> queue;
    queue.push_back({0, a_.size(), 0, b_.size()});
    while (!queue.empty()) {
      auto [a_lo, a_hi, b_lo, b_hi] = queue.back();
      queue.pop_back();
      MatchBlock m = find_longest_match(a_lo, a_hi, b_lo, b_hi);
      if (m.size > 0) {
        blocks.push_back(m);
        if (a_lo < m.a_start && b_lo < m.b_start) {
          queue.push_back({a_lo, m.a_start, b_lo, m.b_start});
        }
        if (m.a_start + m.size < a_hi && m.b_start + m.size < b_hi) {
          queue.push_back({m.a_start + m.size, a_hi, m.b_start + m.size, b_hi});
        }
      }
    }
    std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) {
      return x.a_start < y.a_start;
    });

    // Merge adjacent blocks.
    std::vector<MatchBlock> merged;
    for (const MatchBlock& m : blocks) {
      if (!merged.empty() && merged.back().a_start + merged.back().size == m.a_start &&
          merged.back().b_start + merged.back().size == m.b_start) {
        merged.back().size += m.size;
      } else {
        merged.push_back(m);
      }
    }
    merged.push_back({a_.size(), b_.size(), 0});
    return merged;
  }

  std::vector<OpCode> opcodes() {
    std::vector<OpCode> ops;
    std::size_t i = 0, j = 0;
    for (const MatchBlock& m : matching_blocks()) {
      OpCode gap;
      gap.a_begin = i;
      gap.a_end = m.a_start;
      gap.b_begin = j;
      gap.b_end = m.b_start;
      if (i < m.a_start && j < m.b_start) {
        gap.tag = OpTag::Replace;
        ops.push_back(gap);
      } else if (i < m.a_start) {
        gap.tag = OpTag::Delete;
        ops.push_back(gap);
      } else if (j < m.b_start) {
        gap.tag = OpTag::Insert;
        ops.push_back(gap);
      }
      if (m.size > 0) {
        ops.push_back({OpTag::Equal, m.a_start, m.a_start + m.size,
                       m.b_start, m.b_start + m.size});
      }
      i = m.a_start + m.size;
      j = m.b_start + m.size;
    }
    return ops;
  }

 private:
  std::size_t intern(const T& e) {
    auto [it, inserted] = ids_.try_emplace(e, ids_.size());
    return it->second;
  }

  std::span<const T> a_, b_;
  std::unordered_map<T, std::size_t> ids_;
  std::vector<std::size_t> a_ids_, b_ids_;
  std::vector<std::vector<std::size_t>> buckets_;  // element id -> positions in b
  std::vector<char> popular_;
  std::vector<std::size_t> run_, new_run_;
  std::vector<std::size_t> touched_, new_touched_;
};

template <typename T>
std::vector<MatchBlock> matching_blocks(std::span<const T> a, std::span<const T> b,
                                        bool autojunk = false) {
  SequenceMatcher<T> m(a, b, autojunk);
  return m.matching_blocks();
}

template <typename T>
std::vector<OpCode> opcodes(std::span<const T> a, std::span<const T> b,
                            bool autojunk = false) {
  SequenceMatcher<T> m(a, b, autojunk);
  return m.opcodes();
}

}  // namespace hashshare
