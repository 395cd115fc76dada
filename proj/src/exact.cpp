#include "gmatch/exact.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace gmatch {
namespace {

// Values up to this index are cached; larger arguments are computed by
// stepping forward from the top of the cache without storing the prefix
// (a full table to n = 10000 would hold ~150 MB of digits).
constexpr std::uint32_t kMemoLimit = 2048;

class Memo {
 public:
  BigInt factorial(std::uint32_t n) {
    std::lock_guard lock(mutex_);
    while (factorials_.size() <= n) {
      const auto k = static_cast<unsigned long>(factorials_.size());
      factorials_.push_back(factorials_.back() * k);
    }
    return factorials_[n];
  }

  BigInt derangement(std::uint32_t n) {
    std::lock_guard lock(mutex_);
    while (derangements_.size() <= n) {
      const auto k = static_cast<unsigned long>(derangements_.size());
      const auto& d1 = derangements_[k - 1];
      const auto& d2 = derangements_[k - 2];
      BigInt next = d1 + d2;
      next *= k - 1;
      derangements_.push_back(std::move(next));
    }
    return derangements_[n];
  }

  static Memo& instance() {
    static Memo memo;
    return memo;
  }

 private:
  Memo() : factorials_{BigInt(1)}, derangements_{BigInt(1), BigInt(0)} {}

  std::mutex mutex_;
  std::vector<BigInt> factorials_;
  std::vector<BigInt> derangements_;
};

void require_m_le_n(std::uint32_t n, std::uint32_t m) {
  if (m > n) {
    throw std::domain_error("fixed-point count m=" + std::to_string(m) +
                            " exceeds n=" + std::to_string(n));
  }
}

void require_positive_n(std::uint32_t n) {
  if (n == 0) throw std::domain_error("n must be positive");
}

std::size_t bit_length(const BigInt& x) {
  return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

// Number of permutations of n elements with at most m fixed points.
BigInt at_most_count(std::uint32_t n, std::uint32_t m) {
  // G(n,k) = C(n, n-k) D(n-k). Sum over whichever side of m is shorter, using
  // D(j) = j D(j-1) + (-1)^j and C(n, j+1) = C(n, j) (n-j)/(j+1).
  auto sum_range = [n](std::uint32_t j_lo, std::uint32_t j_hi) {
    BigInt total = 0;
    BigInt d = derangement_recurrence(j_lo);
    BigInt c = binomial(n, j_lo);
    for (std::uint32_t j = j_lo;; ++j) {
      total += c * d;
      if (j == j_hi) break;
      c *= n - j;
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), j + 1);
      d *= j + 1;
      if ((j + 1) % 2 == 0) {
        d += 1;
      } else {
        d -= 1;
      }
    }
    return total;
  };

  if (m == n) return factorial(n);
  // at most m fixed points <=> j = n-k ranges over [n-m, n].
  if (m + 1 <= n - m) return sum_range(n - m, n);
  return factorial(n) - sum_range(0, n - m - 1);
}

}  // namespace

ExactProbability::ExactProbability(BigInt num, BigInt den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (sgn(den_) <= 0) throw std::domain_error("probability denominator must be positive");
  if (sgn(num_) < 0 || num_ > den_) {
    throw std::domain_error("probability must lie in [0, 1]");
  }
  BigInt g;
  mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  if (g != 1) {
    mpz_divexact(num_.get_mpz_t(), num_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
  }
}

double ExactProbability::to_double() const { return rational_to_double(num_, den_); }

std::string ExactProbability::to_string() const {
  return num_.get_str() + "/" + den_.get_str();
}

ExactProbability ExactProbability::complement() const {
  return ExactProbability(den_ - num_, den_);
}

ExactProbability operator+(const ExactProbability& a, const ExactProbability& b) {
  return ExactProbability(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

double rational_to_double(const BigInt& num, const BigInt& den) {
  if (sgn(den) <= 0) throw std::domain_error("denominator must be positive");
  if (sgn(num) < 0) return -rational_to_double(-num, den);
  if (sgn(num) == 0) return 0.0;

  // Scale so the integer quotient carries at least 55 significant bits, then
  // round the quotient (plus a sticky bit for the remainder) to the precision
  // available at the result's binade.
  const auto e = static_cast<long>(bit_length(num)) - static_cast<long>(bit_length(den));
  const long shift = 56 - e;
  BigInt scaled_num = num;
  BigInt scaled_den = den;
  if (shift >= 0) {
    scaled_num <<= static_cast<mp_bitcnt_t>(shift);
  } else {
    scaled_den <<= static_cast<mp_bitcnt_t>(-shift);
  }
  BigInt q;
  BigInt r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  const bool sticky = sgn(r) != 0;

  // value = q * 2^-shift, msb of q at bit L-1.
  const auto length = static_cast<long>(bit_length(q));
  const long msb_exponent = length - 1 - shift;
  if (msb_exponent > 1023) return HUGE_VAL;

  long precision = 53;
  if (msb_exponent < -1022) precision = 53 - (-1022 - msb_exponent);
  if (precision < 0) return 0.0;

  const long drop = length - precision;  // >= 2 by construction
  BigInt mantissa = q >> static_cast<mp_bitcnt_t>(drop);
  const bool half = mpz_tstbit(q.get_mpz_t(), static_cast<mp_bitcnt_t>(drop - 1)) != 0;
  bool rest = sticky;
  if (!rest) {
    // any set bit strictly below the half bit
    const auto lowest = mpz_scan1(q.get_mpz_t(), 0);
    rest = static_cast<long>(lowest) < drop - 1;
  }
  if (half && (rest || mpz_odd_p(mantissa.get_mpz_t()))) mantissa += 1;

  return std::ldexp(mantissa.get_d(), static_cast<int>(drop - shift));
}

BigInt factorial(std::uint32_t n) {
  if (n <= kMemoLimit) return Memo::instance().factorial(n);
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

BigInt binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

BigInt derangement_recurrence(std::uint32_t n) {
  if (n <= kMemoLimit) return Memo::instance().derangement(n);
  BigInt previous = Memo::instance().derangement(kMemoLimit - 1);
  BigInt current = Memo::instance().derangement(kMemoLimit);
  for (std::uint32_t k = kMemoLimit + 1; k <= n; ++k) {
    BigInt next = current + previous;
    next *= k - 1;
    previous = std::move(current);
    current = std::move(next);
  }
  return current;
}

BigInt derangement_sum(std::uint32_t n) {
  // term_k = n!/k!, built from k = n downwards: term_n = 1, term_{k-1} = k term_k.
  BigInt total = 0;
  BigInt term = 1;
  for (std::uint32_t k = n;; --k) {
    if (k % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
    if (k == 0) break;
    term *= k;
  }
  return total;
}

BigInt rencontres(std::uint32_t n, std::uint32_t m) {
  require_m_le_n(n, m);
  return binomial(n, m) * derangement_recurrence(n - m);
}

ExactProbability fixed_point_prob(std::uint32_t n, std::uint32_t m) {
  require_positive_n(n);
  require_m_le_n(n, m);
  return ExactProbability(derangement_recurrence(n - m), factorial(m) * factorial(n - m));
}

double fixed_point_prob_limit(std::uint32_t m) {
  const double inv_e = std::exp(-1.0);
  if (m <= 170) {
    double fact = 1.0;
    for (std::uint32_t k = 2; k <= m; ++k) fact *= k;
    return inv_e / fact;
  }
  double value = inv_e;
  for (std::uint32_t k = 2; k <= m && value > 0.0; ++k) value /= k;
  return value;
}

ExactProbability cumulative_prob(std::uint32_t n, std::uint32_t m) {
  require_positive_n(n);
  require_m_le_n(n, m);
  return ExactProbability(at_most_count(n, m), factorial(n));
}

ExactProbability tail_prob(std::uint32_t n, std::uint32_t m) {
  return cumulative_prob(n, m).complement();
}

double tail_prob_limit(std::uint32_t m) {
  // 1 - e^-1 sum_{k<=m} 1/k! == e^-1 sum_{k>m} 1/k!; the right side avoids
  // cancellation for large m.
  double term = 1.0;
  for (std::uint32_t k = 2; k <= m + 1 && term > 0.0; ++k) term /= k;
  double sum = 0.0;
  for (std::uint32_t k = m + 2; term > 0.0 && term >= sum * 1e-18; ++k) {
    sum += term;
    term /= k;
  }
  return std::exp(-1.0) * sum;
}

}  // namespace gmatch
