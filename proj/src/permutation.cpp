#include "gmatch/permutation.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace gmatch {
namespace {

void require_same_size(const Permutation& p, const Permutation& truth) {
  if (p.size() != truth.size()) {
    throw std::invalid_argument("permutation sizes differ: " + std::to_string(p.size()) +
                                " vs " + std::to_string(truth.size()));
  }
}

void require_movable(const Permutation& p) {
  if (p.size() < 2) throw std::domain_error("perturbation needs at least 2 elements");
}

std::uint32_t checked_index(std::size_t position, std::size_t n) {
  if (position < 1 || position > n) {
    throw std::out_of_range("position " + std::to_string(position) + " outside 1.." +
                            std::to_string(n));
  }
  return static_cast<std::uint32_t>(position - 1);
}

}  // namespace

Permutation Permutation::identity(std::size_t n) {
  if (n == 0) throw std::invalid_argument("permutation size must be positive");
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 0U);
  return Permutation(std::move(images));
}

Permutation Permutation::from_zero_based(std::vector<std::uint32_t> images) {
  if (images.empty()) throw std::invalid_argument("permutation size must be positive");
  if (!is_bijection(images)) throw std::invalid_argument("values are not a bijection");
  return Permutation(std::move(images));
}

Permutation Permutation::from_one_based(std::span<const std::uint32_t> images) {
  std::vector<std::uint32_t> zero(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i] == 0) throw std::invalid_argument("1-based permutation contains 0");
    zero[i] = images[i] - 1;
  }
  return from_zero_based(std::move(zero));
}

Permutation Permutation::from_one_based(std::initializer_list<std::uint32_t> images) {
  return from_one_based(std::span<const std::uint32_t>(images.begin(), images.size()));
}

Permutation Permutation::parse(std::string_view text) {
  std::vector<std::uint32_t> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto token = text.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\r')) token.remove_suffix(1);
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      throw std::invalid_argument("bad permutation entry '" + std::string(token) + "'");
    }
    values.push_back(value);
    start = end + 1;
  }
  return from_one_based(values);
}

std::uint32_t Permutation::at(std::size_t position) const {
  return images_[checked_index(position, images_.size())] + 1;
}

std::vector<std::uint32_t> Permutation::one_based() const {
  std::vector<std::uint32_t> out(images_);
  for (auto& v : out) ++v;
  return out;
}

std::string Permutation::to_string() const {
  std::string out;
  out.reserve(images_.size() * 4);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i != 0) out.push_back(',');
    out += std::to_string(images_[i] + 1);
  }
  return out;
}

bool is_bijection(std::span<const std::uint32_t> images) {
  std::vector<bool> seen(images.size(), false);
  for (auto v : images) {
    if (v >= images.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

void shuffle_identity_into(std::span<std::uint32_t> out, Rng& rng) {
  std::iota(out.begin(), out.end(), 0U);
  for (std::size_t i = out.size(); i > 1; --i) {
    const auto j = rng.below(i);
    std::swap(out[i - 1], out[j]);
  }
}

Permutation random_permutation(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("permutation size must be positive");
  std::vector<std::uint32_t> images(n);
  shuffle_identity_into(images, rng);
  return Permutation::from_zero_based(std::move(images));
}

std::size_t count_fixed_points(const Permutation& p, const Permutation& truth) {
  require_same_size(p, truth);
  const auto a = p.zero_based();
  const auto b = truth.zero_based();
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) count += a[i] == b[i];
  return count;
}

std::string Ratio::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

Ratio make_ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("ratio denominator is zero");
  const auto g = std::gcd(num, den);
  return {num / g, den / g};
}

Ratio operator+(const Ratio& a, const Ratio& b) {
  return make_ratio(a.num * b.den + b.num * a.den, a.den * b.den);
}

Ratio energy(const Permutation& p, const Permutation& truth) {
  const auto fixed = count_fixed_points(p, truth);
  return make_ratio(p.size() - fixed, p.size());
}

Ratio precision(const Permutation& p, const Permutation& truth) {
  const auto fixed = count_fixed_points(p, truth);
  return make_ratio(fixed, p.size());
}

std::string_view to_string(Operator op) {
  switch (op) {
    case Operator::swap: return "swap";
    case Operator::insertion: return "insertion";
    case Operator::inversion: return "inversion";
    case Operator::scramble: return "scramble";
  }
  return "unknown";
}

Operator parse_operator(std::string_view name) {
  for (auto op : {Operator::swap, Operator::insertion, Operator::inversion, Operator::scramble}) {
    if (name == to_string(op)) return op;
  }
  throw std::invalid_argument("unknown operator '" + std::string(name) + "'");
}

Move draw_move(Operator op, std::size_t n, Rng& rng) {
  if (n < 2) throw std::domain_error("perturbation needs at least 2 elements");
  auto a = static_cast<std::uint32_t>(rng.below(n));
  auto b = static_cast<std::uint32_t>(rng.below(n - 1));
  if (b >= a) ++b;
  if (op != Operator::insertion && b < a) std::swap(a, b);
  return {op, a, b};
}

void apply_move(const Move& move, std::span<std::uint32_t> images, Rng& rng) {
  const auto first = images.begin() + move.first;
  const auto second = images.begin() + move.second;
  switch (move.op) {
    case Operator::swap:
      std::iter_swap(first, second);
      break;
    case Operator::insertion:
      if (move.first < move.second) {
        std::rotate(first, first + 1, second + 1);
      } else {
        std::rotate(second, first, first + 1);
      }
      break;
    case Operator::inversion:
      std::reverse(first, second + 1);
      break;
    case Operator::scramble:
      for (auto i = static_cast<std::size_t>(move.second - move.first) + 1; i > 1; --i) {
        const auto j = rng.below(i);
        std::iter_swap(first + static_cast<std::ptrdiff_t>(i - 1),
                       first + static_cast<std::ptrdiff_t>(j));
      }
      break;
  }
}

namespace {

Permutation moved(const Permutation& p, const Move& move, Rng& rng) {
  auto images = std::vector<std::uint32_t>(p.zero_based().begin(), p.zero_based().end());
  apply_move(move, images, rng);
  return Permutation::from_zero_based(std::move(images));
}

Permutation moved(const Permutation& p, const Move& move) {
  Rng unused(0);
  return moved(p, move, unused);
}

}  // namespace

Permutation perturb(Operator op, const Permutation& p, Rng& rng) {
  require_movable(p);
  const auto move = draw_move(op, p.size(), rng);
  return moved(p, move, rng);
}

Permutation perturb_swap(const Permutation& p, Rng& rng) { return perturb(Operator::swap, p, rng); }
Permutation perturb_insertion(const Permutation& p, Rng& rng) {
  return perturb(Operator::insertion, p, rng);
}
Permutation perturb_inversion(const Permutation& p, Rng& rng) {
  return perturb(Operator::inversion, p, rng);
}
Permutation perturb_scramble(const Permutation& p, Rng& rng) {
  return perturb(Operator::scramble, p, rng);
}

Permutation swap_positions(const Permutation& p, std::size_t i, std::size_t j) {
  require_movable(p);
  const auto a = checked_index(i, p.size());
  const auto b = checked_index(j, p.size());
  if (a == b) throw std::invalid_argument("swap positions must differ");
  return moved(p, {Operator::swap, a, b});
}

Permutation insert_move(const Permutation& p, std::size_t from, std::size_t to) {
  require_movable(p);
  const auto a = checked_index(from, p.size());
  const auto b = checked_index(to, p.size());
  if (a == b) throw std::invalid_argument("insertion source and destination must differ");
  return moved(p, {Operator::insertion, a, b});
}

Permutation invert_segment(const Permutation& p, std::size_t a, std::size_t b) {
  require_movable(p);
  auto lo = checked_index(a, p.size());
  auto hi = checked_index(b, p.size());
  if (hi < lo) std::swap(lo, hi);
  return moved(p, {Operator::inversion, lo, hi});
}

Permutation scramble_segment(const Permutation& p, std::size_t a, std::size_t b, Rng& rng) {
  require_movable(p);
  auto lo = checked_index(a, p.size());
  auto hi = checked_index(b, p.size());
  if (hi < lo) std::swap(lo, hi);
  return moved(p, {Operator::scramble, lo, hi}, rng);
}

std::vector<std::uint64_t> exhaustive_fixed_point_census(std::size_t n) {
  if (n == 0 || n > 10) {
    throw std::domain_error("exhaustive census supports 1 <= n <= 10, got " + std::to_string(n));
  }
  std::vector<std::uint64_t> counts(n + 1, 0);
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 0U);
  do {
    std::size_t fixed = 0;
    for (std::size_t i = 0; i < n; ++i) fixed += images[i] == i;
    ++counts[fixed];
  } while (std::next_permutation(images.begin(), images.end()));
  return counts;
}

}  // namespace gmatch
