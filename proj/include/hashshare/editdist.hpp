#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace hashshare {

// Levenshtein distance with a diagonal band of half-width `band`; returns
// band + 1 when the true distance exceeds the band.
template <typename T>
std::size_t banded_edit_distance(std::span<const T> a, std::span<const T> b,
                                 std::size_t band) {
  const std::size_t n = a.size(), m = b.size();
  if (n < m) return banded_edit_distance(b, a, band);
  if (n - m > band) return band + 1;
  const std::size_t inf = band + 1;

  // row[j - lo] holds D(i, j) for j in the window [lo, hi].
  std::vector<std::size_t> row(2 * band + 2), prev(2 * band + 2);
  auto window_lo = [&](std::size_t i) { return i > band ? i - band : 0; };
  auto window_hi = [&](std::size_t i) { return std::min(m, i + band); };

  for (std::size_t j = window_lo(0); j <= window_hi(0); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = window_lo(i), hi = window_hi(i);
    const std::size_t plo = window_lo(i - 1), phi = window_hi(i - 1);
    for (std::size_t j = lo; j <= hi; ++j) {
      std::size_t best = inf;
      if (j >= plo && j <= phi) best = std::min(best, prev[j - plo] + 1);  // delete a[i-1]
      if (j > lo) best = std::min(best, row[j - 1 - lo] + 1);              // insert b[j-1]
      if (j > 0 && j - 1 >= plo && j - 1 <= phi) {
        std::size_t diag = prev[j - 1 - plo];
        best = std::min(best, a[i - 1] == b[j - 1] ? diag : diag + 1);
      }
      row[j - lo] = std::min(best, inf);
    }
    std::swap(row, prev);
    // prev now holds row i over [window_lo(i), window_hi(i)]
  }
  return std::min(prev[m - window_lo(n)], inf);
}

// Exact Levenshtein distance via band doubling; O(d * max(n, m)).
template <typename T>
std::size_t edit_distance(std::span<const T> a, std::span<const T> b) {
  if (a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin())) return 0;
  std::size_t band = std::max<std::size_t>(
      1, a.size() > b.size() ? a.size() - b.size() : b.size() - a.size());
  for (;;) {
    std::size_t d = banded_edit_distance(a, b, band);
    if (d <= band) return d;
    band *= 2;
  }
}

}  // namespace hashshare
