#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <stdexcept>

#include "gmatch/exact.hpp"
#include "gmatch/permutation.hpp"
#include "oracles.hpp"

using namespace gmatch;

namespace {

Permutation id5() { return Permutation::identity(5); }

}  // namespace

TEST_CASE("permutation construction and serialization") {
  const auto p = Permutation::from_one_based({3, 2, 1, 4, 5});
  CHECK(p.size() == 5);
  CHECK(p.at(1) == 3);
  CHECK(p.to_string() == "3,2,1,4,5");
  CHECK(Permutation::parse("3, 2,1,4,5") == p);
  CHECK(p.one_based() == std::vector<std::uint32_t>{3, 2, 1, 4, 5});

  CHECK_THROWS_AS(Permutation::from_one_based({1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_one_based({0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_one_based({1, 2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::parse("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::identity(0), std::invalid_argument);
  CHECK_THROWS_AS(p.at(6), std::out_of_range);
}

TEST_CASE("random permutation") {
  Rng rng(1);
  CHECK(random_permutation(1, rng) == Permutation::identity(1));

  Rng a(99);
  Rng b(99);
  CHECK(random_permutation(100, a) == random_permutation(100, b));
}

TEST_CASE("random permutation of three elements is uniform") {
  Rng rng(2024);
  std::map<std::string, std::uint64_t> counts;
  constexpr std::uint64_t kSamples = 60000;
  for (std::uint64_t s = 0; s < kSamples; ++s) ++counts[random_permutation(3, rng).to_string()];
  CHECK(counts.size() == 6);
  for (const auto& [perm, count] : counts) {
    CHECK_MESSAGE(testing::within_sigmas(static_cast<double>(count) / kSamples, 1.0 / 6, kSamples),
                  perm);
  }
}

TEST_CASE("bounded draws are unbiased") {
  // A bound just above 2^63 rejects almost half of the raw draws; a modulo
  // reduction would put two thirds of the mass in the lower half.
  Rng rng(5);
  const std::uint64_t bound = (std::uint64_t{1} << 63) + 1;
  std::uint64_t high = 0;
  constexpr int kDraws = 20000;
  for (int i = 0; i < kDraws; ++i) {
    const auto v = rng.below(bound);
    REQUIRE(v < bound);
    high += v >= bound / 2;
  }
  CHECK(testing::within_sigmas(static_cast<double>(high) / kDraws, 0.5, kDraws));
}

TEST_CASE("fixed points energy precision") {
  const auto p = Permutation::from_one_based({3, 2, 1, 4, 5});
  CHECK(count_fixed_points(p, id5()) == 3);
  CHECK(count_fixed_points(id5(), id5()) == 5);
  CHECK(count_fixed_points(Permutation::from_one_based({2, 3, 4, 5, 1}), id5()) == 0);
  CHECK_THROWS_AS(count_fixed_points(p, Permutation::identity(4)), std::invalid_argument);

  CHECK(energy(p, id5()) == Ratio{2, 5});
  CHECK(energy(id5(), id5()) == Ratio{0, 1});
  CHECK(precision(p, id5()) == Ratio{3, 5});
  CHECK(precision(id5(), id5()) == Ratio{1, 1});
  CHECK(precision(Permutation::from_one_based({2, 1, 4, 5, 3}), id5()) == Ratio{0, 1});
  CHECK_THROWS_AS(energy(p, Permutation::identity(4)), std::invalid_argument);
}

TEST_CASE("energy never equals 1/n and energy plus precision is one") {
  for (std::size_t n = 2; n <= 7; ++n) {
    std::vector<std::uint32_t> images(n);
    std::iota(images.begin(), images.end(), 0U);
    const auto truth = Permutation::identity(n);
    do {
      const auto p = Permutation::from_zero_based(images);
      const auto e = energy(p, truth);
      REQUIRE_FALSE(e == make_ratio(1, n));
      REQUIRE(e + precision(p, truth) == Ratio{1, 1});
    } while (std::next_permutation(images.begin(), images.end()));
  }
}

TEST_CASE("deterministic operators") {
  CHECK(swap_positions(id5(), 1, 3).to_string() == "3,2,1,4,5");
  CHECK(invert_segment(id5(), 2, 4).to_string() == "1,4,3,2,5");
  CHECK(invert_segment(id5(), 4, 2).to_string() == "1,4,3,2,5");
  CHECK(insert_move(id5(), 2, 5).to_string() == "1,3,4,5,2");
  CHECK(insert_move(id5(), 5, 2).to_string() == "1,5,2,3,4");

  Rng rng(3);
  const auto scrambled = scramble_segment(id5(), 2, 4, rng);
  CHECK(scrambled.at(1) == 1);
  CHECK(scrambled.at(5) == 5);

  CHECK_THROWS_AS(swap_positions(id5(), 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(swap_positions(id5(), 0, 2), std::out_of_range);
  CHECK_THROWS_AS(insert_move(id5(), 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(swap_positions(Permutation::identity(1), 1, 1), std::domain_error);
}

TEST_CASE("operators on a single element are rejected") {
  Rng rng(1);
  const auto one = Permutation::identity(1);
  CHECK_THROWS_AS(perturb_swap(one, rng), std::domain_error);
  CHECK_THROWS_AS(perturb_insertion(one, rng), std::domain_error);
  CHECK_THROWS_AS(perturb_inversion(one, rng), std::domain_error);
  CHECK_THROWS_AS(perturb_scramble(one, rng), std::domain_error);
}

TEST_CASE("swap and inversion are involutions") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    const auto p = random_permutation(n, rng);
    const std::size_t i = 1 + rng.below(n);
    std::size_t j = 1 + rng.below(n);
    if (j == i) j = i % n + 1;
    CHECK(swap_positions(swap_positions(p, i, j), i, j) == p);
    CHECK(invert_segment(invert_segment(p, i, j), i, j) == p);
  }
}

TEST_CASE("segment operators leave the outside untouched") {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.below(60);
    const auto p = random_permutation(n, rng);
    const std::size_t a = 1 + rng.below(n);
    const std::size_t b = 1 + rng.below(n);
    const auto lo = std::min(a, b);
    const auto hi = std::max(a, b);
    const auto inverted = invert_segment(p, a, b);
    const auto scrambled = scramble_segment(p, a, b, rng);
    for (std::size_t k = 1; k <= n; ++k) {
      if (k >= lo && k <= hi) continue;
      REQUIRE(inverted.at(k) == p.at(k));
      REQUIRE(scrambled.at(k) == p.at(k));
    }
  }
}

TEST_CASE("random operators keep the bijection and do not touch the input") {
  Rng rng(13);
  for (std::size_t n : {2u, 5u, 50u}) {
    auto p = random_permutation(n, rng);
    for (auto op : {Operator::swap, Operator::insertion, Operator::inversion, Operator::scramble}) {
      for (int trial = 0; trial < 2000; ++trial) {
        const auto before = p;
        const auto next = perturb(op, p, rng);
        REQUIRE(p == before);
        REQUIRE(is_bijection(next.zero_based()));
        p = next;
      }
    }
  }
}

TEST_CASE("swap always changes exactly two positions") {
  Rng rng(14);
  const auto p = random_permutation(30, rng);
  for (int trial = 0; trial < 200; ++trial) {
    const auto q = perturb_swap(p, rng);
    std::size_t differ = 0;
    for (std::size_t k = 1; k <= 30; ++k) differ += p.at(k) != q.at(k);
    CHECK(differ == 2);
  }
}

TEST_CASE("operator names") {
  for (auto op : {Operator::swap, Operator::insertion, Operator::inversion, Operator::scramble}) {
    CHECK(parse_operator(to_string(op)) == op);
  }
  CHECK_THROWS_AS(parse_operator("flip"), std::invalid_argument);
}

TEST_CASE("exhaustive census") {
  CHECK(exhaustive_fixed_point_census(3) == std::vector<std::uint64_t>{2, 3, 0, 1});
  CHECK(exhaustive_fixed_point_census(1) == std::vector<std::uint64_t>{0, 1});
  CHECK(exhaustive_fixed_point_census(4) == std::vector<std::uint64_t>{9, 8, 6, 0, 1});
  CHECK(exhaustive_fixed_point_census(7) ==
        std::vector<std::uint64_t>{1854, 1855, 924, 315, 70, 21, 0, 1});
  const auto ten = exhaustive_fixed_point_census(10);
  CHECK(std::accumulate(ten.begin(), ten.end(), std::uint64_t{0}) == 3628800);
  CHECK_THROWS_AS(exhaustive_fixed_point_census(11), std::domain_error);
  CHECK_THROWS_AS(exhaustive_fixed_point_census(0), std::domain_error);
}

TEST_CASE("sampled fixed-point distribution at n = 8 matches the census") {
  const auto census = exhaustive_fixed_point_census(8);
  constexpr std::uint64_t kSamples = 100000;
  std::vector<std::uint64_t> counts(9, 0);
  Rng rng(808);
  const auto truth = Permutation::identity(8);
  for (std::uint64_t s = 0; s < kSamples; ++s) {
    ++counts[count_fixed_points(random_permutation(8, rng), truth)];
  }
  for (std::size_t m = 0; m <= 8; ++m) {
    const double expected = static_cast<double>(census[m]) / 40320.0;
    CHECK_MESSAGE(testing::within_sigmas(static_cast<double>(counts[m]) / kSamples, expected, kSamples),
                  "m=" << m);
  }
  CHECK(counts[7] == 0);
}
