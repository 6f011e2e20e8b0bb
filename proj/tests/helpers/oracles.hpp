#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "hashshare/matcher.hpp"

namespace testhelp {

// Longest contiguous common block by exhaustive scan; ties broken by the
// smallest a index, then the smallest b index.
template <typename T>
hashshare::MatchBlock brute_longest_block(std::span<const T> a, std::span<const T> b,
                                          std::size_t alo, std::size_t ahi,
                                          std::size_t blo, std::size_t bhi) {
  hashshare::MatchBlock best{alo, blo, 0};
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      std::size_t k = 0;
      while (i + k < ahi && j + k < bhi && a[i + k] == b[j + k]) ++k;
      if (k > best.size) best = {i, j, k};
    }
  }
  return best;
}

template <typename T>
void brute_blocks_rec(std::span<const T> a, std::span<const T> b, std::size_t alo,
                      std::size_t ahi, std::size_t blo, std::size_t bhi,
                      std::vector<hashshare::MatchBlock>& out) {
  hashshare::MatchBlock block = brute_longest_block(a, b, alo, ahi, blo, bhi);
  if (block.size == 0) return;
  brute_blocks_rec(a, b, alo, block.a_start, blo, block.b_start, out);
  out.push_back(block);
  brute_blocks_rec(a, b, block.a_start + block.size, ahi, block.b_start + block.size, bhi,
                   out);
}

// Reference matching-block decomposition, including the merge of adjacent
// blocks and the trailing zero-size sentinel.
template <typename T>
std::vector<hashshare::MatchBlock> brute_matching_blocks(std::span<const T> a,
                                                         std::span<const T> b) {
  std::vector<hashshare::MatchBlock> raw;
  brute_blocks_rec(a, b, 0, a.size(), 0, b.size(), raw);
  std::vector<hashshare::MatchBlock> merged;
  for (const hashshare::MatchBlock& block : raw) {
    if (!merged.empty() && merged.back().a_start + merged.back().size == block.a_start &&
        merged.back().b_start + merged.back().size == block.b_start) {
      merged.back().size += block.size;
    } else {
      merged.push_back(block);
    }
  }
  merged.push_back({a.size(), b.size(), 0});
  return merged;
}

// Full quadratic-DP Levenshtein distance.
template <typename T>
std::size_t dp_edit_distance(std::span<const T> a, std::span<const T> b) {
  std::vector<std::size_t> prev(b.size() + 1), row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({prev[j] + 1, row[j - 1] + 1, sub});
    }
    std::swap(prev, row);
  }
  return prev[b.size()];
}

}  // namespace testhelp
