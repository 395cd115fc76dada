#include "gmatch/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gmatch {

std::string_view to_string(Objective objective) {
  return objective == Objective::structural ? "structural" : "oracle";
}

Objective parse_objective(std::string_view name) {
  if (name == "structural") return Objective::structural;
  if (name == "oracle") return Objective::oracle;
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

AnnealConfig AnnealConfig::defaults_for(std::size_t n) {
  AnnealConfig config;
  config.steps = 100 * static_cast<std::uint64_t>(n);
  config.epoch_length = n;
  return config;
}

void AnnealConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
  if (epoch_length < 1) throw std::invalid_argument("epoch length must be at least 1");
  if (!(cooling_factor > 0.0 && cooling_factor < 1.0)) {
    throw std::invalid_argument("cooling factor must lie in (0, 1)");
  }
  if (initial_temperature && !(*initial_temperature >= 0.0 && std::isfinite(*initial_temperature))) {
    throw std::invalid_argument("initial temperature must be finite and non-negative");
  }
  if (!initial_temperature) {
    if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
      throw std::invalid_argument("target acceptance must lie in (0, 1)");
    }
    if (calibration_samples < 1) throw std::invalid_argument("calibration needs samples >= 1");
  }
}

std::uint64_t objective_value(const GraphPair& pair, Objective objective,
                              std::span<const std::uint32_t> candidate) {
  if (objective == Objective::structural) {
    const auto n = pair.size();
    std::uint64_t mismatches = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        mismatches += pair.first.get(i, j) != pair.second.get(candidate[i], candidate[j]);
      }
    }
    return mismatches;
  }
  const auto truth = pair.ground_truth.zero_based();
  std::uint64_t misplaced = 0;
  for (std::size_t i = 0; i < candidate.size(); ++i) misplaced += candidate[i] != truth[i];
  return misplaced;
}

namespace {

// Draws proposals around a current candidate and evaluates their deltas. The
// random stream is consumed identically in both evaluation modes.
class Proposals {
 public:
  // A probe only evaluates deltas: it skips the O(n^2) setup and never tracks
  // the absolute objective.
  Proposals(const GraphPair& pair, const AnnealConfig& config, std::vector<std::uint32_t> start,
            bool probe = false)
      : pair_(pair),
        op_(config.op),
        objective_(config.objective),
        mode_(probe ? Evaluation::incremental : config.evaluation),
        probe_(probe),
        current_(std::move(start)),
        proposed_(current_) {
    if (probe_) return;
    value_ = objective_value(pair_, objective_, current_);
    if (uses_swap_evaluator()) evaluator_.emplace(pair_, current_);
  }

  std::uint64_t value() const { return value_; }
  std::span<const std::uint32_t> current() const { return current_; }

  std::int64_t propose(Rng& rng) {
    move_ = draw_move(op_, current_.size(), rng);
    if (uses_swap_evaluator()) return delta_ = evaluator_->delta(move_.first, move_.second);

    // undo whatever a rejected proposal left behind
    std::copy(current_.begin() + lo_, current_.begin() + hi_ + 1, proposed_.begin() + lo_);
    lo_ = std::min(move_.first, move_.second);
    hi_ = std::max(move_.first, move_.second);
    apply_move(move_, proposed_, rng);

    if (mode_ == Evaluation::full_recompute) {
      const auto next = objective_value(pair_, objective_, proposed_);
      return delta_ = static_cast<std::int64_t>(next) - static_cast<std::int64_t>(value_);
    }
    changed_.clear();
    for (auto k = lo_; k <= hi_; ++k) {
      if (proposed_[k] != current_[k]) changed_.push_back(k);
    }
    if (objective_ == Objective::structural) {
      return delta_ = structural_energy_delta(pair_, current_, proposed_, changed_);
    }
    const auto truth = pair_.ground_truth.zero_based();
    std::int64_t delta = 0;
    for (auto k : changed_) {
      delta += static_cast<int>(proposed_[k] != truth[k]) - static_cast<int>(current_[k] != truth[k]);
    }
    return delta_ = delta;
  }

  void accept() {
    value_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(value_) + delta_);
    if (uses_swap_evaluator()) {
      evaluator_->apply(move_.first, move_.second, delta_);
      std::swap(current_[move_.first], current_[move_.second]);
      return;
    }
    std::copy(proposed_.begin() + lo_, proposed_.begin() + hi_ + 1, current_.begin() + lo_);
  }

 private:
  bool uses_swap_evaluator() const {
    return !probe_ && mode_ == Evaluation::incremental && op_ == Operator::swap &&
           objective_ == Objective::structural;
  }

  const GraphPair& pair_;
  Operator op_;
  Objective objective_;
  Evaluation mode_;
  bool probe_;
  std::vector<std::uint32_t> current_;
  std::vector<std::uint32_t> proposed_;
  std::vector<std::uint32_t> changed_;
  std::optional<SwapEvaluator> evaluator_;
  std::uint64_t value_ = 0;
  Move move_;
  std::uint32_t lo_ = 0;
  std::uint32_t hi_ = 0;
  std::int64_t delta_ = 0;
};

std::vector<std::uint32_t> random_images(std::size_t n, Rng& rng) {
  std::vector<std::uint32_t> images(n);
  shuffle_identity_into(images, rng);
  return images;
}

double mean_acceptance(const std::vector<double>& uphill, double temperature) {
  double sum = 0.0;
  for (auto delta : uphill) sum += std::exp(-delta / temperature);
  return sum / static_cast<double>(uphill.size());
}

}  // namespace

double calibrate_initial_temperature(const GraphPair& pair, Operator op, Objective objective,
                                     double target_acceptance, std::uint32_t samples, Rng& rng) {
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0)) {
    throw std::invalid_argument("target acceptance must lie in (0, 1)");
  }
  if (samples < 1) throw std::invalid_argument("calibration needs samples >= 1");
  if (pair.size() < 2) throw std::invalid_argument("graph pair needs n >= 2");

  AnnealConfig probe;
  probe.op = op;
  probe.objective = objective;
  std::vector<double> uphill;
  for (std::uint32_t s = 0; s < samples; ++s) {
    Proposals proposals(pair, probe, random_images(pair.size(), rng), true);
    const auto delta = proposals.propose(rng);
    if (delta > 0) uphill.push_back(static_cast<double>(delta));
  }
  if (uphill.empty()) return 1.0;

  double lo = 0.0;
  double hi = *std::max_element(uphill.begin(), uphill.end());
  while (mean_acceptance(uphill, hi) < target_acceptance) hi *= 2.0;
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mean_acceptance(uphill, mid) < target_acceptance) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

AnnealResult anneal(const GraphPair& pair, const AnnealConfig& config, const StepObserver& observer) {
  config.validate();
  const auto n = pair.size();
  if (n < 2) throw std::invalid_argument("annealing needs n >= 2");

  Rng rng(config.seed);
  const double t0 = config.initial_temperature
                        ? *config.initial_temperature
                        : calibrate_initial_temperature(pair, config.op, config.objective,
                                                        config.target_acceptance,
                                                        config.calibration_samples, rng);
  AnnealResult result;
  result.initial_temperature = t0;
  std::uint64_t best = 0;
  std::vector<std::uint32_t> best_images;
  bool have_best = false;
  double temperature = t0;

  for (std::uint32_t restart = 0; restart <= config.restarts; ++restart) {
    Proposals proposals(pair, config, random_images(n, rng));
    temperature = t0;
    if (!have_best || proposals.value() < best) {
      best = proposals.value();
      best_images.assign(proposals.current().begin(), proposals.current().end());
      have_best = true;
    }
    const std::uint64_t offset = restart * config.steps;
    if (config.record_trace) result.trace.push_back({offset, temperature, proposals.value(), best});

    std::uint32_t stalled_epochs = 0;
    bool improved_this_epoch = false;
    for (std::uint64_t step = 0; step < config.steps; ++step) {
      if (step > 0 && step % config.epoch_length == 0) {
        temperature *= config.cooling_factor;
        stalled_epochs = improved_this_epoch ? 0 : stalled_epochs + 1;
        improved_this_epoch = false;
        if (config.reheat_after > 0 && stalled_epochs >= config.reheat_after) {
          temperature = t0;
          stalled_epochs = 0;
        }
        if (config.record_trace) {
          result.trace.push_back({offset + step, temperature, proposals.value(), best});
        }
      }

      const auto delta = proposals.propose(rng);
      bool accepted = delta <= 0;
      if (!accepted && temperature > 0.0) {
        accepted = rng.unit() < std::exp(-static_cast<double>(delta) / temperature);
      }
      if (accepted) {
        proposals.accept();
        ++result.accepted_count;
        if (delta < 0) ++result.improved_count;
        if (proposals.value() < best) {
          best = proposals.value();
          best_images.assign(proposals.current().begin(), proposals.current().end());
          improved_this_epoch = true;
        }
      }
      if (observer) {
        observer({offset + step, temperature, delta, accepted, proposals.value(), best});
      }
    }
    if (config.record_trace) {
      result.trace.push_back({offset + config.steps, temperature, proposals.value(), best});
    }
  }

  result.best_permutation = Permutation::from_zero_based(std::move(best_images));
  result.best_objective = static_cast<double>(best);
  result.final_fixed_points = count_fixed_points(result.best_permutation, pair.ground_truth);
  result.final_temperature = temperature;
  return result;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace) {
  out << "step,temperature,current,best\n";
  char temperature[32];
  for (const auto& sample : trace) {
    std::snprintf(temperature, sizeof temperature, "%.6g", sample.temperature);
    out << sample.step << ',' << temperature << ',' << sample.current << ',' << sample.best << '\n';
  }
}

}  // namespace gmatch
