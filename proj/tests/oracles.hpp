#pragma once

// Brute-force oracles used only by the tests. They deliberately avoid the
// library's own code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace gmatch::testing {

/// Fixed-point histogram of S_n by enumeration.
inline std::vector<std::uint64_t> enumerate_fixed_points(std::size_t n) {
  std::vector<std::uint64_t> counts(n + 1, 0);
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    std::size_t fixed = 0;
    for (std::size_t i = 0; i < n; ++i) fixed += p[i] == static_cast<int>(i);
    ++counts[fixed];
  } while (std::next_permutation(p.begin(), p.end()));
  return counts;
}

using DenseGraph = std::vector<std::vector<bool>>;

/// Mismatched pairs i<j between a[i][j] and b[p(i)][p(j)], 0-based p.
inline std::uint64_t mismatch_count(const DenseGraph& a, const DenseGraph& b,
                                    const std::vector<std::uint32_t>& p) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) count += a[i][j] != b[p[i]][p[j]];
  }
  return count;
}

/// Four-sigma band for a binomial proportion.
inline bool within_sigmas(double observed, double expected, std::uint64_t samples,
                          double sigmas = 4.0) {
  const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(samples));
  return std::abs(observed - expected) <= sigmas * sigma;
}

}  // namespace gmatch::testing
