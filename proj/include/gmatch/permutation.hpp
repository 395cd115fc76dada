#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gmatch/random.hpp"

namespace gmatch {

/// Bijection on {1,...,n}. Position i (1-based) holds the vertex matched to
/// vertex i. Stored 0-based; every public accessor and serialization is 1-based.
class Permutation {
 public:
  /// Identity of size n (the true solution). Throws std::invalid_argument on n == 0.
  static Permutation identity(std::size_t n);

  /// Builds from 1-based images. Throws std::invalid_argument unless the
  /// values are a bijection on {1,...,n}.
  static Permutation from_one_based(std::span<const std::uint32_t> images);
  static Permutation from_one_based(std::initializer_list<std::uint32_t> images);

  /// Builds from 0-based images, validated the same way.
  static Permutation from_zero_based(std::vector<std::uint32_t> images);

  /// Parses "3,2,1,4,5".
  static Permutation parse(std::string_view text);

  std::size_t size() const { return images_.size(); }

  /// 1-based image of 1-based position.
  std::uint32_t at(std::size_t position) const;

  /// 0-based view used by the kernels.
  std::span<const std::uint32_t> zero_based() const { return images_; }

  std::vector<std::uint32_t> one_based() const;

  /// Comma-separated 1-based images.
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {}

  std::vector<std::uint32_t> images_;
};

/// True iff `images` (0-based) is a bijection on {0,...,size-1}.
bool is_bijection(std::span<const std::uint32_t> images);

/// Uniform permutation by Fisher-Yates with unbiased bounded draws.
Permutation random_permutation(std::size_t n, Rng& rng);

/// Fills `out` with a uniform permutation of {0,...,out.size()-1} in place.
/// Allocation-free variant for sampling loops; same stream usage as
/// random_permutation.
void shuffle_identity_into(std::span<std::uint32_t> out, Rng& rng);

/// |{i : p(i) = truth(i)}|. Throws std::invalid_argument on size mismatch.
std::size_t count_fixed_points(const Permutation& p, const Permutation& truth);

/// Non-negative rational a/b with b > 0, stored reduced.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

Ratio make_ratio(std::uint64_t num, std::uint64_t den);
Ratio operator+(const Ratio& a, const Ratio& b);

/// Fraction of misplaced elements, (n - fixed points) / n.
Ratio energy(const Permutation& p, const Permutation& truth);

/// 1 - energy.
Ratio precision(const Permutation& p, const Permutation& truth);

enum class Operator { swap, insertion, inversion, scramble };

std::string_view to_string(Operator op);
/// Throws std::invalid_argument on an unknown name.
Operator parse_operator(std::string_view name);

// Random neighborhood moves. Each returns a new permutation; the input is not
// modified. Positions are drawn as two distinct uniform indices. All throw
// std::domain_error when p.size() < 2.
Permutation perturb_swap(const Permutation& p, Rng& rng);
Permutation perturb_insertion(const Permutation& p, Rng& rng);
Permutation perturb_inversion(const Permutation& p, Rng& rng);
Permutation perturb_scramble(const Permutation& p, Rng& rng);
Permutation perturb(Operator op, const Permutation& p, Rng& rng);

// Deterministic forms with explicit 1-based positions.

/// Exchanges the images at positions i and j (i != j).
Permutation swap_positions(const Permutation& p, std::size_t i, std::size_t j);
/// Removes the element at `from` and reinserts it so that it ends at `to`.
Permutation insert_move(const Permutation& p, std::size_t from, std::size_t to);
/// Reverses the inclusive segment between positions a and b (either order).
Permutation invert_segment(const Permutation& p, std::size_t a, std::size_t b);
/// Uniformly reshuffles the inclusive segment between positions a and b.
Permutation scramble_segment(const Permutation& p, std::size_t a, std::size_t b, Rng& rng);

/// A concrete move on 0-based positions: `first` < `second` for segment
/// moves; for insertion `first` is the source and `second` the destination.
struct Move {
  Operator op = Operator::swap;
  std::uint32_t first = 0;
  std::uint32_t second = 0;
};

/// Draws two distinct uniform positions for `op`.
Move draw_move(Operator op, std::size_t n, Rng& rng);

/// Applies `move` in place on 0-based images. Scramble consumes `rng`.
void apply_move(const Move& move, std::span<std::uint32_t> images, Rng& rng);

/// Entry m is the number of permutations of S_n with exactly m fixed points,
/// by exhaustive enumeration. Throws std::domain_error when n > 10 or n == 0.
std::vector<std::uint64_t> exhaustive_fixed_point_census(std::size_t n);

}  // namespace gmatch
