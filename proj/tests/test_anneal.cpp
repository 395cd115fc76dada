#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gmatch/anneal.hpp"

using namespace gmatch;

namespace {

constexpr Operator kOperators[] = {Operator::swap, Operator::insertion, Operator::inversion,
                                   Operator::scramble};

AnnealConfig small_config(std::size_t n, std::uint64_t seed) {
  auto config = AnnealConfig::defaults_for(n);
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("default configuration scales with n") {
  const auto config = AnnealConfig::defaults_for(50);
  CHECK(config.steps == 5000);
  CHECK(config.epoch_length == 50);
  CHECK(config.cooling_factor == 0.95);
  CHECK_FALSE(config.initial_temperature.has_value());
  CHECK(config.target_acceptance == 0.8);
  CHECK(config.op == Operator::swap);
  CHECK(config.objective == Objective::structural);
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("invalid configurations are rejected") {
  const auto pair = generate_pair(10, 0.5, Relabel::random, 1);
  auto expect_reject = [&](auto mutate) {
    auto config = small_config(10, 1);
    mutate(config);
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    CHECK_THROWS_AS(anneal(pair, config), std::invalid_argument);
  };
  expect_reject([](AnnealConfig& c) { c.steps = 0; });
  expect_reject([](AnnealConfig& c) { c.epoch_length = 0; });
  expect_reject([](AnnealConfig& c) { c.cooling_factor = 0.0; });
  expect_reject([](AnnealConfig& c) { c.cooling_factor = 1.5; });
  expect_reject([](AnnealConfig& c) { c.initial_temperature = -1.0; });
  expect_reject([](AnnealConfig& c) { c.target_acceptance = 0.0; });
  expect_reject([](AnnealConfig& c) { c.target_acceptance = 1.0; });
  expect_reject([](AnnealConfig& c) { c.calibration_samples = 0; });
}

TEST_CASE("objective names") {
  CHECK(parse_objective("structural") == Objective::structural);
  CHECK(parse_objective("oracle") == Objective::oracle);
  CHECK(to_string(Objective::oracle) == "oracle");
  CHECK_THROWS_AS(parse_objective("psychic"), std::invalid_argument);
}

TEST_CASE("zero temperature never accepts an uphill move") {
  for (std::uint64_t run = 0; run < 100; ++run) {
    const auto pair = generate_pair(20, 0.5, Relabel::random, 1000 + run);
    auto config = small_config(20, run);
    config.initial_temperature = 0.0;
    config.record_trace = true;
    config.epoch_length = 1;
    std::uint64_t previous = UINT64_MAX;
    bool monotone = true;
    const auto result = anneal(pair, config, [&](const StepEvent& e) {
      monotone = monotone && e.current <= previous;
      previous = e.current;
      if (e.accepted) monotone = monotone && e.delta <= 0;
    });
    REQUIRE(monotone);
    for (std::size_t k = 1; k < result.trace.size(); ++k) {
      REQUIRE(result.trace[k].current <= result.trace[k - 1].current);
    }
    CHECK(result.final_temperature == 0.0);
  }
}

TEST_CASE("small instances are solved") {
  // Epoch length scaled so the schedule keeps its default 100 temperature
  // levels; with epoch = n the chain freezes within the first 2% of the run.
  int solved = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    const auto pair = generate_pair(8, 0.5, Relabel::random, 5000 + run);
    auto config = small_config(8, run);
    config.steps = 100000;
    config.epoch_length = config.steps / 100;
    const auto result = anneal(pair, config);
    solved += result.best_objective == 0.0;
  }
  CHECK(solved >= 90);
}

TEST_CASE("oracle objective reaches the ground truth at small n") {
  const auto pair = generate_pair(12, 0.5, Relabel::random, 77);
  auto config = small_config(12, 3);
  config.objective = Objective::oracle;
  config.steps = 20000;
  const auto result = anneal(pair, config);
  CHECK(result.best_objective == 0.0);
  CHECK(result.best_permutation == pair.ground_truth);
  CHECK(result.final_fixed_points == 12);
}

TEST_CASE("annealing is deterministic in its inputs") {
  const auto pair = generate_pair(30, 0.5, Relabel::random, 9);
  for (auto op : kOperators) {
    auto config = small_config(30, 21);
    config.op = op;
    config.record_trace = true;
    const auto a = anneal(pair, config);
    const auto b = anneal(pair, config);
    CHECK(a == b);
    config.seed = 22;
    const auto c = anneal(pair, config);
    CHECK_FALSE(a.trace == c.trace);
  }
}

TEST_CASE("incremental and full evaluation give identical runs") {
  for (auto objective : {Objective::structural, Objective::oracle}) {
    for (auto op : kOperators) {
      const auto pair = generate_pair(25, 0.5, Relabel::random, 4);
      auto config = small_config(25, 8);
      config.op = op;
      config.objective = objective;
      config.steps = 3000;
      config.record_trace = true;
      std::vector<std::tuple<std::int64_t, bool, std::uint64_t>> fast_events;
      std::vector<std::tuple<std::int64_t, bool, std::uint64_t>> slow_events;
      const auto fast = anneal(pair, config, [&](const StepEvent& e) {
        fast_events.emplace_back(e.delta, e.accepted, e.current);
      });
      config.evaluation = Evaluation::full_recompute;
      const auto slow = anneal(pair, config, [&](const StepEvent& e) {
        slow_events.emplace_back(e.delta, e.accepted, e.current);
      });
      CAPTURE(to_string(op));
      CHECK(fast_events == slow_events);
      CHECK(fast == slow);
    }
  }
}

TEST_CASE("tracked current objective matches a recomputation") {
  const auto pair = generate_pair(15, 0.5, Relabel::random, 12);
  for (auto op : kOperators) {
    auto config = small_config(15, 2);
    config.op = op;
    config.steps = 1500;
    const auto result = anneal(pair, config);
    CHECK(static_cast<double>(objective_value(pair, config.objective,
                                              result.best_permutation.zero_based())) ==
          result.best_objective);
  }
}

TEST_CASE("best objective is the minimum over visited states") {
  const auto pair = generate_pair(40, 0.5, Relabel::random, 13);
  auto config = small_config(40, 5);
  std::uint64_t lowest = UINT64_MAX;
  std::uint64_t accepted = 0;
  std::uint64_t improved = 0;
  const auto result = anneal(pair, config, [&](const StepEvent& e) {
    const auto before = e.accepted ? static_cast<std::uint64_t>(e.current - e.delta) : e.current;
    lowest = std::min({lowest, before, e.current});
    CHECK(e.best == lowest);
    accepted += e.accepted;
    improved += e.accepted && e.delta < 0;
  });
  CHECK(result.best_objective == static_cast<double>(lowest));
  CHECK(result.accepted_count == accepted);
  CHECK(result.improved_count == improved);
  CHECK(result.best_permutation.size() == 40);
  CHECK(is_bijection(result.best_permutation.zero_based()));
}

TEST_CASE("geometric cooling schedule") {
  const auto pair = generate_pair(10, 0.5, Relabel::random, 14);
  auto config = small_config(10, 6);
  config.initial_temperature = 2.0;
  config.steps = 100;
  config.epoch_length = 10;
  config.cooling_factor = 0.5;
  const auto result = anneal(pair, config, [&](const StepEvent& e) {
    REQUIRE(e.temperature == doctest::Approx(2.0 * std::pow(0.5, static_cast<double>(e.step / 10))));
  });
  CHECK(result.initial_temperature == 2.0);
  CHECK(result.final_temperature == doctest::Approx(2.0 * std::pow(0.5, 9.0)));
}

TEST_CASE("calibrated temperature hits the requested acceptance") {
  const auto pair = generate_pair(100, 0.5, Relabel::random, 15);
  Rng rng(1);
  const double t0 =
      calibrate_initial_temperature(pair, Operator::swap, Objective::structural, 0.8, 1000, rng);
  CHECK(t0 > 0.0);

  // measure at t0 on independent uphill proposals from random states
  Rng probe(2);
  std::uint64_t uphill = 0;
  double acceptance = 0.0;
  while (uphill < 2000) {
    const auto p = random_permutation(100, probe);
    const auto i = 1 + probe.below(100);
    auto j = 1 + probe.below(99);
    if (j >= i) ++j;
    const auto delta = structural_energy_delta_swap(pair, p, i, j);
    if (delta <= 0) continue;
    ++uphill;
    acceptance += std::exp(-static_cast<double>(delta) / t0);
  }
  acceptance /= static_cast<double>(uphill);
  CHECK(acceptance >= 0.7);
  CHECK(acceptance <= 0.9);

  Rng again(1);
  const double hotter =
      calibrate_initial_temperature(pair, Operator::swap, Objective::structural, 0.9, 1000, again);
  Rng third(1);
  const double colder =
      calibrate_initial_temperature(pair, Operator::swap, Objective::structural, 0.5, 1000, third);
  CHECK(colder < t0);
  CHECK(t0 < hotter);
}

TEST_CASE("calibration falls back when no uphill move exists") {
  // two vertices: swapping them never changes the structural energy
  const auto pair = generate_pair(2, 0.5, Relabel::random, 16);
  Rng rng(3);
  CHECK(calibrate_initial_temperature(pair, Operator::swap, Objective::structural, 0.8, 100, rng) ==
        1.0);
}

TEST_CASE("very high temperature accepts almost everything") {
  const auto pair = generate_pair(50, 0.5, Relabel::random, 17);
  auto config = small_config(50, 7);
  config.initial_temperature = 1e9;
  config.steps = 20000;
  config.epoch_length = 20000;
  const auto result = anneal(pair, config);
  CHECK(static_cast<double>(result.accepted_count) / 20000.0 > 0.99);
}

TEST_CASE("restarts and reheating") {
  const auto pair = generate_pair(20, 0.5, Relabel::random, 18);
  auto config = small_config(20, 9);
  const auto plain = anneal(pair, config);

  config.restarts = 2;
  std::uint64_t events = 0;
  const auto restarted = anneal(pair, config, [&](const StepEvent&) { ++events; });
  CHECK(events == 3 * config.steps);
  CHECK(restarted.best_objective <= plain.best_objective);

  config.restarts = 0;
  config.reheat_after = 3;
  config.record_trace = true;
  const auto reheated = anneal(pair, config);
  bool went_up = false;
  for (std::size_t k = 1; k < reheated.trace.size(); ++k) {
    went_up = went_up || reheated.trace[k].temperature > reheated.trace[k - 1].temperature;
  }
  CHECK(went_up);
}

TEST_CASE("trace csv") {
  const auto pair = generate_pair(6, 0.5, Relabel::random, 19);
  auto config = small_config(6, 1);
  config.record_trace = true;
  const auto result = anneal(pair, config);
  REQUIRE_FALSE(result.trace.empty());
  std::ostringstream out;
  write_trace_csv(out, result.trace);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "step,temperature,current,best");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == result.trace.size());
}

TEST_CASE("pairs smaller than two vertices are rejected") {
  GraphPair tiny;
  tiny.first = BitMatrix(1);
  tiny.second = BitMatrix(1);
  tiny.ground_truth = Permutation::identity(1);
  CHECK_THROWS_AS(anneal(tiny, small_config(1, 0)), std::invalid_argument);
}
