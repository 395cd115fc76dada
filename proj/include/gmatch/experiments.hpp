#pragma once

// Experiment harnesses: random-permutation census against the exact tail,
// and annealing success rates on random isomorphic graph pairs.
//
// Every unit of work (a block of samples, one annealing run) draws from its own
// stream seeded by derive_seed(master, experiment, n, index), so results do not
// depend on how work is scheduled across threads.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmatch/anneal.hpp"
#include "gmatch/exact.hpp"
#include "gmatch/graph.hpp"

namespace gmatch {

inline constexpr std::string_view kVersion = "1.0.0";

/// Experiment ids folded into seed derivation.
enum class ExperimentId : std::uint64_t {
  table1 = 1,
  table2_graph = 2,
  table2_anneal = 3,
  comparison = 4,
};

/// Samples per independently seeded block in the census kernels.
inline constexpr std::uint64_t kSampleBlock = 4096;

enum class Backend {
  serial,  // plain loops; the reference the parallel path is tested against
  openmp,
};

struct Execution {
  Backend backend = Backend::openmp;
  unsigned workers = 0;  // 0: OpenMP default
  /// Called on the calling thread after each finished row.
  std::function<void(const std::string&)> progress;
};

struct ReportMetadata {
  std::uint64_t master_seed = 0;
  std::string generator{kGeneratorId};
  std::string version{kVersion};
  double duration_seconds = 0.0;
};

template <class Row>
struct ExperimentReport {
  ReportMetadata metadata;
  std::vector<Row> rows;
};

struct Table1Row {
  std::uint32_t n = 0;
  std::uint64_t samples = 0;
  std::uint32_t threshold = 0;
  std::uint64_t count = 0;
  double fraction = 0.0;
  ExactProbability exact_tail;
  double exact_tail_value = 0.0;
  double z_score = 0.0;
};

struct Table1Params {
  std::vector<std::uint32_t> n_values{20, 50, 100, 300, 500, 1000, 10000};
  std::uint64_t samples = 100000;
  std::uint32_t threshold = 3;
  std::uint64_t master_seed = 0;
};

/// Counts, for each n, how many of `samples` uniform permutations have MORE
/// than `threshold` fixed points. Rows are sorted by n. Throws
/// std::invalid_argument if samples == 0 or any threshold >= n.
ExperimentReport<Table1Row> run_table1(const Table1Params& params, const Execution& exec = {});

/// Number of uniform permutations of size n, out of `samples`, with more than
/// `threshold` fixed points. The census kernel behind run_table1.
std::uint64_t count_tail_samples(std::uint32_t n, std::uint64_t samples, std::uint32_t threshold,
                                 std::uint64_t master_seed, const Execution& exec);

/// Annealing hyperparameters before they are resolved for a given n.
struct AnnealSettings {
  std::optional<std::uint64_t> steps;         // default 100 n
  std::optional<std::uint64_t> epoch_length;  // default n
  double cooling_factor = 0.95;
  std::optional<double> initial_temperature;  // unset: auto
  double target_acceptance = 0.8;
  Operator op = Operator::swap;
  Objective objective = Objective::structural;
  double edge_probability = 0.5;
  Relabel relabel = Relabel::identity;

  AnnealConfig resolve(std::uint32_t n, std::uint64_t seed) const;
  /// "auto" or the fixed temperature with 6 significant digits.
  std::string t0_mode() const;
};

struct Table2Row {
  std::uint32_t n = 0;
  std::uint32_t runs = 0;
  std::uint32_t threshold = 0;
  std::uint32_t success_count = 0;
  double success_fraction = 0.0;
  Objective objective = Objective::structural;
  Operator op = Operator::swap;
  std::uint64_t steps = 0;
  std::uint64_t epoch_length = 0;
  double cooling_factor = 0.0;
  std::string t0_mode;
  double edge_probability = 0.0;
};

struct Table2Params {
  std::vector<std::uint32_t> n_values{20, 50, 100, 300, 500, 1000};
  std::optional<std::uint32_t> runs;  // unset: default_runs(n)
  std::uint32_t threshold = 3;
  AnnealSettings settings;
  std::uint64_t master_seed = 0;
};

/// 1000 runs for n <= 100, 200 otherwise.
std::uint32_t default_runs(std::uint32_t n);

/// For each n, anneals `runs` fresh graph pairs and counts runs whose best
/// permutation has MORE than `threshold` correct matches.
ExperimentReport<Table2Row> run_table2(const Table2Params& params, const Execution& exec = {});

/// Outcome of one table2 run: whether it beat the threshold.
bool table2_run_succeeds(std::uint32_t n, std::uint32_t run, const Table2Params& params);

struct ComparisonBin {
  std::uint32_t m = 0;
  std::uint64_t count = 0;
  double empirical = 0.0;
  ExactProbability exact;
  double exact_value = 0.0;
  double z_score = 0.0;
};

struct Comparison {
  std::uint32_t n = 0;
  std::uint64_t samples = 0;
  std::uint64_t master_seed = 0;
  std::vector<ComparisonBin> bins;  // m = 0 .. min(n, 10)
};

/// Empirical fixed-point histogram against the exact distribution. Requires
/// 1 <= n <= 10000 and samples >= 1000.
Comparison compare_exact_empirical(std::uint32_t n, std::uint64_t samples,
                                   std::uint64_t master_seed, const Execution& exec = {});

/// (observed - expected) / sqrt(expected (1 - expected) / samples); 0 when both
/// variance and difference vanish.
double binomial_z_score(double observed_fraction, double expected, std::uint64_t samples);

}  // namespace gmatch
