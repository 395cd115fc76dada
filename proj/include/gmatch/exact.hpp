#pragma once

// Exact counting of permutations by fixed points and the probabilities
// derived from it. All integer results are arbitrary precision (GMP).

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace gmatch {

using BigInt = mpz_class;

/// Exact probability held as a reduced fraction num/den with 0 <= num <= den.
class ExactProbability {
 public:
  ExactProbability() : num_(0), den_(1) {}
  /// Reduces to lowest terms. Throws std::domain_error unless 0 <= num <= den
  /// and den > 0.
  ExactProbability(BigInt num, BigInt den);

  static ExactProbability zero() { return {}; }
  static ExactProbability one() { return {BigInt(1), BigInt(1)}; }

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }

  /// Correctly rounded (nearest, ties to even) conversion. Works for
  /// denominators far beyond the double range; tiny values go subnormal or 0.
  double to_double() const;

  /// "num/den" in decimal.
  std::string to_string() const;

  /// 1 - p.
  ExactProbability complement() const;

  friend ExactProbability operator+(const ExactProbability& a, const ExactProbability& b);
  friend bool operator==(const ExactProbability& a, const ExactProbability& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  BigInt num_;
  BigInt den_;
};

/// Correctly rounded value of num/den for num >= 0, den > 0.
double rational_to_double(const BigInt& num, const BigInt& den);

/// n! (memoized for small n).
BigInt factorial(std::uint32_t n);

/// Binomial coefficient C(n, k); zero when k > n.
BigInt binomial(std::uint32_t n, std::uint32_t k);

/// Derangement number via D(n) = (n-1)(D(n-1) + D(n-2)), D(0)=1, D(1)=0.
BigInt derangement_recurrence(std::uint32_t n);

/// Derangement number via the alternating sum of n!/k! over k = 0..n.
/// Computed independently of the recurrence.
BigInt derangement_sum(std::uint32_t n);

/// Number of permutations of n elements with exactly m fixed points,
/// C(n,m) D(n-m). Throws std::domain_error when m > n.
BigInt rencontres(std::uint32_t n, std::uint32_t m);

/// P(exactly m fixed points) = D(n-m) / (m! (n-m)!). Requires n >= 1, m <= n.
ExactProbability fixed_point_prob(std::uint32_t n, std::uint32_t m);

/// Large-n limit of fixed_point_prob: e^-1 / m!.
double fixed_point_prob_limit(std::uint32_t m);

/// P(at most m fixed points), exact for finite n.
ExactProbability cumulative_prob(std::uint32_t n, std::uint32_t m);

/// P(strictly more than m fixed points) = 1 - cumulative_prob(n, m).
ExactProbability tail_prob(std::uint32_t n, std::uint32_t m);

/// Large-n limit of tail_prob: 1 - e^-1 * sum_{k<=m} 1/k!.
double tail_prob_limit(std::uint32_t m);

}  // namespace gmatch
