#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gmatch {

/// Identifier recorded in report metadata so a reader knows exactly which
/// stream produced the numbers.
inline constexpr std::string_view kGeneratorId =
    "mt19937_64/splitmix64-mix/lemire-bounded";

/// SplitMix64 finalizer. Used as the avalanche step of seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from (master seed, experiment id, n,
/// index). Each component is folded through the avalanche mix so adjacent
/// indices give unrelated seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t experiment,
                                    std::uint64_t n, std::uint64_t index) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ experiment);
  h = mix64(h ^ n);
  h = mix64(h ^ index);
  return h;
}

/// Seeded random stream. Wraps std::mt19937_64 (whose output sequence is fixed
/// by the standard) and draws bounded integers and unit doubles with portable,
/// exactly specified methods rather than the implementation-defined
/// std::uniform_*_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). Lemire's multiply-and-reject method;
  /// exactly unbiased. bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Bernoulli(p) draw.
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gmatch
