#include "gmatch/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gmatch {
namespace {

std::uint64_t seed_for(std::uint64_t master, ExperimentId id, std::uint64_t n, std::uint64_t index) {
  return derive_seed(master, static_cast<std::uint64_t>(id), n, index);
}

int thread_count(const Execution& exec) {
#ifdef _OPENMP
  return exec.workers > 0 ? static_cast<int>(exec.workers) : omp_get_max_threads();
#else
  (void)exec;
  return 1;
#endif
}

bool parallel(const Execution& exec) {
#ifdef _OPENMP
  return exec.backend == Backend::openmp;
#else
  (void)exec;
  return false;
#endif
}

std::uint64_t block_count(std::uint64_t samples) { return (samples + kSampleBlock - 1) / kSampleBlock; }

std::uint64_t block_size(std::uint64_t samples, std::uint64_t block) {
  return std::min(kSampleBlock, samples - block * kSampleBlock);
}

std::uint64_t tail_block(std::uint32_t n, std::uint64_t samples, std::uint32_t threshold,
                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint32_t> images(n);
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    shuffle_identity_into(images, rng);
    std::uint32_t fixed = 0;
    for (std::uint32_t i = 0; i < n; ++i) fixed += images[i] == i;
    hits += fixed > threshold;
  }
  return hits;
}

void histogram_block(std::uint32_t n, std::uint64_t samples, std::uint64_t seed,
                     std::vector<std::uint64_t>& bins) {
  Rng rng(seed);
  std::vector<std::uint32_t> images(n);
  for (std::uint64_t s = 0; s < samples; ++s) {
    shuffle_identity_into(images, rng);
    std::uint32_t fixed = 0;
    for (std::uint32_t i = 0; i < n; ++i) fixed += images[i] == i;
    if (fixed < bins.size()) ++bins[fixed];
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report_progress(const Execution& exec, const std::string& message) {
  if (exec.progress) exec.progress(message);
}

}  // namespace

double binomial_z_score(double observed_fraction, double expected, std::uint64_t samples) {
  const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(samples));
  const double diff = observed_fraction - expected;
  if (sigma == 0.0) {
    if (diff == 0.0) return 0.0;
    return diff > 0 ? std::numeric_limits<double>::infinity()
                    : -std::numeric_limits<double>::infinity();
  }
  return diff / sigma;
}

std::uint64_t count_tail_samples(std::uint32_t n, std::uint64_t samples, std::uint32_t threshold,
                                 std::uint64_t master_seed, const Execution& exec) {
  const auto blocks = block_count(samples);
  std::uint64_t total = 0;
  if (parallel(exec)) {
    const auto signed_blocks = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : total) num_threads(thread_count(exec))
    for (std::int64_t b = 0; b < signed_blocks; ++b) {
      const auto block = static_cast<std::uint64_t>(b);
      total += tail_block(n, block_size(samples, block), threshold,
                          seed_for(master_seed, ExperimentId::table1, n, block));
    }
  } else {
    for (std::uint64_t block = 0; block < blocks; ++block) {
      total += tail_block(n, block_size(samples, block), threshold,
                          seed_for(master_seed, ExperimentId::table1, n, block));
    }
  }
  return total;
}

ExperimentReport<Table1Row> run_table1(const Table1Params& params, const Execution& exec) {
  if (params.samples == 0) throw std::invalid_argument("samples must be at least 1");
  auto n_values = params.n_values;
  std::sort(n_values.begin(), n_values.end());
  for (auto n : n_values) {
    if (n == 0) throw std::invalid_argument("n must be positive");
    if (params.threshold >= n) {
      throw std::invalid_argument("row n=" + std::to_string(n) + ": threshold " +
                                  std::to_string(params.threshold) + " must be below n");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport<Table1Row> report;
  report.metadata.master_seed = params.master_seed;
  for (auto n : n_values) {
    Table1Row row;
    row.n = n;
    row.samples = params.samples;
    row.threshold = params.threshold;
    row.count = count_tail_samples(n, params.samples, params.threshold, params.master_seed, exec);
    row.fraction = static_cast<double>(row.count) / static_cast<double>(row.samples);
    row.exact_tail = tail_prob(n, params.threshold);
    row.exact_tail_value = row.exact_tail.to_double();
    row.z_score = binomial_z_score(row.fraction, row.exact_tail_value, row.samples);
    report.rows.push_back(std::move(row));
    report_progress(exec, "table1: n=" + std::to_string(n) + " done");
  }
  report.metadata.duration_seconds = seconds_since(start);
  return report;
}

AnnealConfig AnnealSettings::resolve(std::uint32_t n, std::uint64_t seed) const {
  auto config = AnnealConfig::defaults_for(n);
  if (steps) config.steps = *steps;
  if (epoch_length) config.epoch_length = *epoch_length;
  config.cooling_factor = cooling_factor;
  config.initial_temperature = initial_temperature;
  config.target_acceptance = target_acceptance;
  config.op = op;
  config.objective = objective;
  config.seed = seed;
  return config;
}

std::string AnnealSettings::t0_mode() const {
  if (!initial_temperature) return "auto";
  char text[32];
  std::snprintf(text, sizeof text, "%.6g", *initial_temperature);
  return text;
}

std::uint32_t default_runs(std::uint32_t n) { return n <= 100 ? 1000 : 200; }

bool table2_run_succeeds(std::uint32_t n, std::uint32_t run, const Table2Params& params) {
  const auto& settings = params.settings;
  const auto pair = generate_pair(n, settings.edge_probability, settings.relabel,
                                  seed_for(params.master_seed, ExperimentId::table2_graph, n, run));
  const auto config =
      settings.resolve(n, seed_for(params.master_seed, ExperimentId::table2_anneal, n, run));
  return anneal(pair, config).final_fixed_points > params.threshold;
}

ExperimentReport<Table2Row> run_table2(const Table2Params& params, const Execution& exec) {
  if (params.runs && *params.runs == 0) throw std::invalid_argument("runs must be at least 1");
  const auto& settings = params.settings;
  if (!(settings.edge_probability > 0.0 && settings.edge_probability < 1.0)) {
    throw std::invalid_argument("edge probability must lie in (0, 1)");
  }
  auto n_values = params.n_values;
  std::sort(n_values.begin(), n_values.end());
  for (auto n : n_values) {
    if (n < 2) throw std::invalid_argument("graph size must be at least 2");
    if (params.threshold >= n) {
      throw std::invalid_argument("row n=" + std::to_string(n) + ": threshold " +
                                  std::to_string(params.threshold) + " must be below n");
    }
    settings.resolve(n, 0).validate();
  }

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport<Table2Row> report;
  report.metadata.master_seed = params.master_seed;
  for (auto n : n_values) {
    const auto runs = params.runs.value_or(default_runs(n));
    std::vector<std::uint8_t> success(runs, 0);
    if (parallel(exec)) {
      const auto signed_runs = static_cast<std::int64_t>(runs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(exec))
      for (std::int64_t r = 0; r < signed_runs; ++r) {
        success[static_cast<std::size_t>(r)] =
            table2_run_succeeds(n, static_cast<std::uint32_t>(r), params);
      }
    } else {
      for (std::uint32_t r = 0; r < runs; ++r) success[r] = table2_run_succeeds(n, r, params);
    }

    const auto resolved = settings.resolve(n, 0);
    Table2Row row;
    row.n = n;
    row.runs = runs;
    row.threshold = params.threshold;
    row.success_count =
        static_cast<std::uint32_t>(std::count(success.begin(), success.end(), std::uint8_t{1}));
    row.success_fraction = static_cast<double>(row.success_count) / runs;
    row.objective = settings.objective;
    row.op = settings.op;
    row.steps = resolved.steps;
    row.epoch_length = resolved.epoch_length;
    row.cooling_factor = settings.cooling_factor;
    row.t0_mode = settings.t0_mode();
    row.edge_probability = settings.edge_probability;
    report.rows.push_back(std::move(row));
    report_progress(exec, "table2: n=" + std::to_string(n) + " done (" + std::to_string(runs) +
                              " runs)");
  }
  report.metadata.duration_seconds = seconds_since(start);
  return report;
}

Comparison compare_exact_empirical(std::uint32_t n, std::uint64_t samples,
                                   std::uint64_t master_seed, const Execution& exec) {
  if (n == 0 || n > 10000) throw std::invalid_argument("comparison needs 1 <= n <= 10000");
  if (samples < 1000) throw std::invalid_argument("comparison needs at least 1000 samples");

  const std::uint32_t top = std::min<std::uint32_t>(n, 10);
  std::vector<std::uint64_t> totals(top + 1, 0);
  const auto blocks = block_count(samples);
  if (parallel(exec)) {
    const auto signed_blocks = static_cast<std::int64_t>(blocks);
#pragma omp parallel num_threads(thread_count(exec))
    {
      std::vector<std::uint64_t> local(top + 1, 0);
#pragma omp for schedule(dynamic, 1) nowait
      for (std::int64_t b = 0; b < signed_blocks; ++b) {
        const auto block = static_cast<std::uint64_t>(b);
        histogram_block(n, block_size(samples, block),
                        seed_for(master_seed, ExperimentId::comparison, n, block), local);
      }
#pragma omp critical
      for (std::size_t m = 0; m <= top; ++m) totals[m] += local[m];
    }
  } else {
    for (std::uint64_t block = 0; block < blocks; ++block) {
      histogram_block(n, block_size(samples, block),
                      seed_for(master_seed, ExperimentId::comparison, n, block), totals);
    }
  }

  Comparison out{n, samples, master_seed, {}};
  for (std::uint32_t m = 0; m <= top; ++m) {
    ComparisonBin bin;
    bin.m = m;
    bin.count = totals[m];
    bin.empirical = static_cast<double>(bin.count) / static_cast<double>(samples);
    bin.exact = fixed_point_prob(n, m);
    bin.exact_value = bin.exact.to_double();
    bin.z_score = binomial_z_score(bin.empirical, bin.exact_value, samples);
    out.bins.push_back(std::move(bin));
  }
  return out;
}

}  // namespace gmatch
