#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "gmatch/permutation.hpp"
#include "gmatch/random.hpp"

namespace gmatch {

/// Square boolean matrix with each row packed into 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n)
      : n_(n), words_per_row_((n + 63) / 64), bits_(n * words_per_row_, 0) {}

  std::size_t size() const { return n_; }
  std::size_t words_per_row() const { return words_per_row_; }

  bool get(std::size_t i, std::size_t j) const {
    return (bits_[i * words_per_row_ + j / 64] >> (j % 64)) & 1U;
  }
  void set(std::size_t i, std::size_t j, bool value) {
    auto& word = bits_[i * words_per_row_ + j / 64];
    const std::uint64_t mask = std::uint64_t{1} << (j % 64);
    word = value ? (word | mask) : (word & ~mask);
  }

  std::span<const std::uint64_t> row(std::size_t i) const {
    return {bits_.data() + i * words_per_row_, words_per_row_};
  }
  std::span<std::uint64_t> row(std::size_t i) {
    return {bits_.data() + i * words_per_row_, words_per_row_};
  }

  /// Number of set entries above the diagonal.
  std::size_t upper_count() const;

  /// Symmetric with zero diagonal.
  bool is_simple_undirected() const;

  /// Exchanges rows i and j and columns i and j: the matrix of the graph after
  /// relabeling vertices i and j.
  void swap_vertices(std::size_t i, std::size_t j);

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

enum class Relabel { identity, random };

std::string_view to_string(Relabel mode);
Relabel parse_relabel(std::string_view name);

/// Two isomorphic graphs: second[gt(i)][gt(j)] == first[i][j] for all i, j.
struct GraphPair {
  BitMatrix first;
  BitMatrix second;
  Permutation ground_truth = Permutation::identity(1);
  double edge_probability = 0.5;
  std::uint64_t seed = 0;
  Relabel relabel = Relabel::identity;

  std::size_t size() const { return first.size(); }
};

/// Erdos-Renyi G(n, p) first graph; second graph is its exact relabeling by the
/// ground truth (identity, or uniform when `relabel` is random). The first
/// graph depends only on (n, p, seed), not on `relabel`.
/// Throws std::invalid_argument for n < 2 or p outside (0, 1).
GraphPair generate_pair(std::size_t n, double edge_probability, Relabel relabel,
                        std::uint64_t seed);

/// True iff both matrices are simple undirected graphs and the ground truth
/// maps one exactly onto the other.
bool is_isomorphic_pair(const GraphPair& pair);

/// Number of vertex pairs i<j where first[i][j] != second[p(i)][p(j)].
std::uint64_t structural_energy(const GraphPair& pair, const Permutation& p);

/// structural_energy(swap(p, i, j)) - structural_energy(p) in O(n), i and j
/// 1-based and distinct.
std::int64_t structural_energy_delta_swap(const GraphPair& pair, const Permutation& p,
                                          std::size_t i, std::size_t j);

/// Change in structural energy between two candidates that differ only at the
/// 0-based positions listed in `changed`. O(|changed| * n).
std::int64_t structural_energy_delta(const GraphPair& pair, std::span<const std::uint32_t> before,
                                     std::span<const std::uint32_t> after,
                                     std::span<const std::uint32_t> changed);

/// Normalized count of misplaced elements against the ground truth.
Ratio oracle_energy(const GraphPair& pair, const Permutation& p);

/// Incremental structural energy for swap moves. Keeps the second graph
/// relabeled by the current candidate so a swap delta is four XOR/popcount
/// passes over two packed rows.
class SwapEvaluator {
 public:
  SwapEvaluator(const GraphPair& pair, std::span<const std::uint32_t> candidate);

  std::uint64_t energy() const { return energy_; }

  /// Delta of swapping 0-based positions i != j.
  std::int64_t delta(std::size_t i, std::size_t j) const;

  /// Commits the swap of positions i and j; `delta` must be delta(i, j).
  void apply(std::size_t i, std::size_t j, std::int64_t delta);

 private:
  const BitMatrix* first_;
  BitMatrix permuted_;  // permuted_[a][b] = second[p(a)][p(b)]
  std::uint64_t energy_ = 0;
};

/// Text format: header "n p seed mode", n rows of 0/1 for each matrix, then the
/// ground truth as a comma-separated 1-based list.
void write_pair(std::ostream& out, const GraphPair& pair);
/// Throws std::runtime_error on malformed input.
GraphPair read_pair(std::istream& in);

}  // namespace gmatch
