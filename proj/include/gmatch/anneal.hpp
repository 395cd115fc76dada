#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "gmatch/graph.hpp"
#include "gmatch/permutation.hpp"

namespace gmatch {

enum class Objective {
  structural,  // edge/non-edge mismatches, needs no ground truth
  oracle,      // misplaced elements against the ground truth
};

std::string_view to_string(Objective objective);
Objective parse_objective(std::string_view name);

/// How proposal deltas are evaluated. Both give identical runs for the same
/// seed; full_recompute is the O(n^2) reference kept for testing.
enum class Evaluation { incremental, full_recompute };

struct AnnealConfig {
  std::uint64_t steps = 1;
  /// Unset means calibrate to `target_acceptance`. Zero gives pure descent.
  std::optional<double> initial_temperature;
  double target_acceptance = 0.8;
  std::uint32_t calibration_samples = 1000;
  double cooling_factor = 0.95;
  std::uint64_t epoch_length = 1;
  Operator op = Operator::swap;
  Objective objective = Objective::structural;
  std::uint64_t seed = 0;
  bool record_trace = false;
  Evaluation evaluation = Evaluation::incremental;

  // Off by default; not used by the table experiments.
  std::uint32_t restarts = 0;      // extra full schedules from fresh random states
  std::uint32_t reheat_after = 0;  // epochs without a new best before T resets to T0

  /// steps = 100 n, epoch_length = n, cooling 0.95, auto T0 at 0.8, swap,
  /// structural objective.
  static AnnealConfig defaults_for(std::size_t n);

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

struct TraceSample {
  std::uint64_t step = 0;
  double temperature = 0.0;
  std::uint64_t current = 0;
  std::uint64_t best = 0;

  friend bool operator==(const TraceSample&, const TraceSample&) = default;
};

struct AnnealResult {
  Permutation best_permutation = Permutation::identity(1);
  /// Objective in raw units: mismatched pairs (structural) or misplaced
  /// elements (oracle).
  double best_objective = 0.0;
  std::size_t final_fixed_points = 0;
  std::uint64_t accepted_count = 0;
  std::uint64_t improved_count = 0;
  double initial_temperature = 0.0;
  double final_temperature = 0.0;
  std::vector<TraceSample> trace;

  friend bool operator==(const AnnealResult&, const AnnealResult&) = default;
};

/// Per-proposal instrumentation for tests.
struct StepEvent {
  std::uint64_t step = 0;
  double temperature = 0.0;
  std::int64_t delta = 0;
  bool accepted = false;
  std::uint64_t current = 0;  // after the decision
  std::uint64_t best = 0;
};
using StepObserver = std::function<void(const StepEvent&)>;

/// Metropolis simulated annealing with geometric cooling from a uniform random
/// start. Deterministic in (pair, config). Throws std::invalid_argument for an
/// invalid config or pair.size() < 2.
AnnealResult anneal(const GraphPair& pair, const AnnealConfig& config,
                    const StepObserver& observer = {});

/// Temperature at which the mean Metropolis acceptance of sampled uphill
/// deltas equals `target_acceptance` (bisection to 1e-3 relative). Each sample
/// is one proposal from a fresh uniform random state. Returns 1.0 when no
/// uphill move is found.
double calibrate_initial_temperature(const GraphPair& pair, Operator op, Objective objective,
                                     double target_acceptance, std::uint32_t samples, Rng& rng);

/// Objective value of a candidate in raw units.
std::uint64_t objective_value(const GraphPair& pair, Objective objective,
                              std::span<const std::uint32_t> candidate);

/// CSV with header step,temperature,current,best.
void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace);

}  // namespace gmatch
