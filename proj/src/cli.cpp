#include "gmatch/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "gmatch/anneal.hpp"
#include "gmatch/exact.hpp"
#include "gmatch/experiments.hpp"
#include "gmatch/graph.hpp"
#include "gmatch/permutation.hpp"
#include "gmatch/report.hpp"

namespace gmatch {
namespace {

constexpr std::uint64_t kDefaultSeed = 1;
constexpr const char* kSeedVariable = "GMATCH_SEED";

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::uint64_t default_seed() {
  const char* text = std::getenv(kSeedVariable);
  if (text == nullptr || *text == '\0') return kDefaultSeed;
  std::uint64_t value = 0;
  const auto* end = text + std::char_traits<char>::length(text);
  auto [ptr, ec] = std::from_chars(text, end, value);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(std::string(kSeedVariable) + " is not an unsigned integer: '" + text + "'");
  }
  return value;
}

std::optional<double> parse_t0(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError("--t0 expects 'auto' or a number, got '" + text + "'");
  }
}

std::string fixed12(double value) {
  char text[40];
  std::snprintf(text, sizeof text, "%.12g", value);
  return text;
}

// Output sink: the --out file when given, otherwise the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

struct CommonOptions {
  std::string format;
  std::string out_path;
  unsigned workers = 0;
  std::string backend = "openmp";
  bool quiet = false;
  bool timing = false;
};

void add_execution_options(CLI::App& app, CommonOptions& common) {
  app.add_option("--workers", common.workers, "Worker threads; 0 uses the OpenMP default")
      ->capture_default_str();
  app.add_option("--backend", common.backend, "Execution backend")
      ->check(CLI::IsMember({"openmp", "serial"}))
      ->capture_default_str();
  app.add_flag("--quiet", common.quiet, "Suppress progress on standard error");
}

Execution make_execution(const CommonOptions& common, std::ostream& err) {
  Execution exec;
  exec.backend = common.backend == "serial" ? Backend::serial : Backend::openmp;
  exec.workers = common.workers;
  if (!common.quiet) exec.progress = [&err](const std::string& line) { err << line << '\n'; };
  return exec;
}

// --- exact ---------------------------------------------------------------

struct ExactOptions {
  std::uint32_t n = 10000;
  std::uint32_t m = 3;
  std::string kind = "tail";
  std::string format = "text";
  bool full = false;
};

std::string abbreviate(const std::string& rational, bool full) {
  constexpr std::size_t kLimit = 120;
  if (full || rational.size() <= kLimit) return rational;
  const auto slash = rational.find('/');
  return rational.substr(0, 20) + "...(" + std::to_string(slash) + " digits)/" +
         rational.substr(slash + 1, 20) + "...(" + std::to_string(rational.size() - slash - 1) +
         " digits)";
}

int cmd_exact(const ExactOptions& options, std::ostream& out) {
  std::string rational;
  double decimal = 0.0;
  std::optional<double> limit;
  if (options.kind == "limit") {
    decimal = fixed_point_prob_limit(options.m);
    limit = tail_prob_limit(options.m);
  } else {
    if (options.n == 0) throw UsageError("--n must be positive");
    if (options.m > options.n) throw UsageError("--m must not exceed --n");
    ExactProbability p;
    if (options.kind == "point") {
      p = fixed_point_prob(options.n, options.m);
      limit = fixed_point_prob_limit(options.m);
    } else if (options.kind == "cumulative") {
      p = cumulative_prob(options.n, options.m);
      limit = 1.0 - tail_prob_limit(options.m);
    } else {
      p = tail_prob(options.n, options.m);
      limit = tail_prob_limit(options.m);
    }
    rational = p.to_string();
    decimal = p.to_double();
  }

  if (options.format == "json") {
    nlohmann::json j = {{"kind", options.kind}, {"m", options.m}};
    if (options.kind == "limit") {
      j["point_limit"] = std::stod(format_sig6(decimal));
      j["tail_limit"] = std::stod(format_sig6(*limit));
    } else {
      j["n"] = options.n;
      j["exact"] = rational;
      j["decimal"] = std::stod(format_sig6(decimal));
      j["limit"] = std::stod(format_sig6(*limit));
    }
    out << j.dump(2) << '\n';
  } else if (options.format == "csv") {
    if (options.kind == "limit") {
      out << "kind,m,point_limit,tail_limit\n"
          << options.kind << ',' << options.m << ',' << format_sig6(decimal) << ','
          << format_sig6(*limit) << '\n';
    } else {
      out << "kind,n,m,exact,decimal,limit\n"
          << options.kind << ',' << options.n << ',' << options.m << ',' << rational << ','
          << format_sig6(decimal) << ',' << format_sig6(*limit) << '\n';
    }
  } else if (options.kind == "limit") {
    out << "kind limit  m=" << options.m << '\n'
        << "point limit e^-1/m!        = " << fixed12(decimal) << '\n'
        << "tail limit  1-e^-1*sum 1/k! = " << fixed12(*limit) << '\n';
  } else {
    out << "kind " << options.kind << "  n=" << options.n << "  m=" << options.m << '\n'
        << "exact   = " << abbreviate(rational, options.full) << '\n'
        << "decimal = " << fixed12(decimal) << '\n'
        << "limit   = " << fixed12(*limit) << '\n';
  }
  return kExitOk;
}

// --- census --------------------------------------------------------------

int cmd_census(std::uint32_t n, const std::string& format, std::ostream& out, std::ostream& err) {
  if (n == 0 || n > 10) throw UsageError("--n must lie in 1..10");
  const auto counts = exhaustive_fixed_point_census(n);
  bool all_match = true;
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream body;
  if (format == "csv") body << "m,exhaustive,rencontres,match\n";
  for (std::uint32_t m = 0; m <= n; ++m) {
    const auto formula = rencontres(n, m);
    const bool match = formula == counts[m];
    all_match = all_match && match;
    if (format == "json") {
      rows.push_back({{"m", m},
                      {"exhaustive", counts[m]},
                      {"rencontres", formula.get_str()},
                      {"match", match}});
    } else if (format == "csv") {
      body << m << ',' << counts[m] << ',' << formula.get_str() << ',' << (match ? "yes" : "no")
           << '\n';
    } else {
      body << "m=" << m << "  exhaustive=" << counts[m] << "  rencontres=" << formula.get_str()
           << (match ? "" : "  MISMATCH") << '\n';
    }
  }
  if (format == "json") {
    out << nlohmann::json{{"n", n}, {"rows", rows}, {"all_match", all_match}}.dump(2) << '\n';
  } else {
    out << body.str();
  }
  if (!all_match) {
    err << "census: exhaustive counts disagree with the rencontres formula\n";
    return kExitRuntime;
  }
  return kExitOk;
}

// --- sample --------------------------------------------------------------

struct SampleOptions {
  std::uint32_t n = 100;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  CommonOptions common;
};

int cmd_sample(const SampleOptions& options, std::ostream& out, std::ostream& err) {
  const auto exec = make_execution(options.common, err);
  const auto comparison = compare_exact_empirical(options.n, options.samples, options.seed, exec);
  Sink sink(options.common.out_path, out);
  if (options.common.format == "json") {
    sink.stream() << comparison_json(comparison).dump(2) << '\n';
  } else {
    write_comparison_csv(sink.stream(), comparison);
  }
  return kExitOk;
}

// --- sa ------------------------------------------------------------------

struct SaOptions {
  std::uint32_t n = 100;
  double edge_prob = 0.5;
  std::string relabel = "identity";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> epoch;
  double cooling = 0.95;
  std::string t0 = "auto";
  double target_acceptance = 0.8;
  std::string op = "swap";
  std::string objective = "structural";
  std::string trace_path;
  std::string graph_in;
  std::string graph_out;
  std::string format = "text";
  std::uint32_t restarts = 0;
  std::uint32_t reheat_after = 0;
};

int cmd_sa(const SaOptions& options, std::ostream& out) {
  GraphPair pair;
  if (!options.graph_in.empty()) {
    std::ifstream in(options.graph_in);
    if (!in) throw std::runtime_error("cannot open graph file '" + options.graph_in + "'");
    pair = read_pair(in);
  } else {
    pair = generate_pair(options.n, options.edge_prob, parse_relabel(options.relabel),
                         derive_seed(options.seed, static_cast<std::uint64_t>(ExperimentId::table2_graph),
                                     options.n, 0));
  }
  const auto n = static_cast<std::uint32_t>(pair.size());
  if (!options.graph_out.empty()) {
    std::ofstream file(options.graph_out);
    if (!file) throw std::runtime_error("cannot open '" + options.graph_out + "'");
    write_pair(file, pair);
  }

  auto config = AnnealConfig::defaults_for(n);
  if (options.steps) config.steps = *options.steps;
  if (options.epoch) config.epoch_length = *options.epoch;
  config.cooling_factor = options.cooling;
  config.initial_temperature = parse_t0(options.t0);
  config.target_acceptance = options.target_acceptance;
  config.op = parse_operator(options.op);
  config.objective = parse_objective(options.objective);
  config.seed = derive_seed(options.seed, static_cast<std::uint64_t>(ExperimentId::table2_anneal), n, 0);
  config.record_trace = !options.trace_path.empty();
  config.restarts = options.restarts;
  config.reheat_after = options.reheat_after;

  const auto result = anneal(pair, config);
  if (config.record_trace) {
    std::ofstream trace(options.trace_path);
    if (!trace) throw std::runtime_error("cannot open trace file '" + options.trace_path + "'");
    write_trace_csv(trace, result.trace);
  }
  const auto precision_value = make_ratio(result.final_fixed_points, n);
  if (options.format == "json") {
    out << nlohmann::json{
               {"n", n},
               {"seed", options.seed},
               {"objective", std::string(to_string(config.objective))},
               {"operator", std::string(to_string(config.op))},
               {"steps", config.steps},
               {"epoch_length", config.epoch_length},
               {"cooling_factor", std::stod(format_sig6(config.cooling_factor))},
               {"initial_temperature", std::stod(format_sig6(result.initial_temperature))},
               {"best_objective", result.best_objective},
               {"fixed_points", result.final_fixed_points},
               {"precision", precision_value.to_string()},
               {"accepted", result.accepted_count},
               {"improved", result.improved_count},
               {"best_permutation", result.best_permutation.to_string()},
           }
               .dump(2)
        << '\n';
  } else {
    out << "n=" << n << " objective=" << to_string(config.objective)
        << " operator=" << to_string(config.op) << " steps=" << config.steps
        << " epoch=" << config.epoch_length << " cooling=" << format_sig6(config.cooling_factor)
        << " t0=" << format_sig6(result.initial_temperature) << '\n'
        << "best objective   " << result.best_objective << '\n'
        << "fixed points     " << result.final_fixed_points << " of " << n << '\n'
        << "precision        " << precision_value.to_string() << " = "
        << format_sig6(precision_value.value()) << '\n'
        << "accepted moves   " << result.accepted_count << '\n'
        << "improving moves  " << result.improved_count << '\n';
  }
  return kExitOk;
}

// --- table1 / table2 -----------------------------------------------------

int cmd_table1(const Table1Params& params, const CommonOptions& common, std::ostream& out,
               std::ostream& err) {
  const auto exec = make_execution(common, err);
  const auto report = run_table1(params, exec);
  Sink sink(common.out_path, out);
  if (common.format == "json") {
    sink.stream() << table1_json(report, params, common.timing).dump(2) << '\n';
  } else {
    write_table1_csv(sink.stream(), report);
  }
  return kExitOk;
}

struct Table2Options {
  Table2Params params;
  std::optional<std::uint32_t> runs;
  std::optional<std::uint64_t> steps;
  std::optional<std::uint64_t> epoch;
  std::string t0 = "auto";
  std::string op = "swap";
  std::string objective = "structural";
  std::string relabel = "identity";
  CommonOptions common;
};

int cmd_table2(Table2Options options, std::ostream& out, std::ostream& err) {
  auto& params = options.params;
  params.runs = options.runs;
  params.settings.steps = options.steps;
  params.settings.epoch_length = options.epoch;
  params.settings.initial_temperature = parse_t0(options.t0);
  params.settings.op = parse_operator(options.op);
  params.settings.objective = parse_objective(options.objective);
  params.settings.relabel = parse_relabel(options.relabel);
  const auto exec = make_execution(options.common, err);
  const auto report = run_table2(params, exec);
  Sink sink(options.common.out_path, out);
  if (options.common.format == "json") {
    sink.stream() << table2_json(report, params, options.common.timing).dump(2) << '\n';
  } else {
    write_table2_csv(sink.stream(), report);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::uint64_t seed = kDefaultSeed;
  try {
    seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const std::string seed_help =
      "Master seed (default " + std::to_string(seed) + "; env " + kSeedVariable + ")";

  CLI::App app{"Derangement theory and simulated-annealing graph matching experiments", "gmatch"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  ExactOptions exact;
  auto* exact_cmd = app.add_subcommand("exact", "Exact fixed-point probabilities");
  exact_cmd->add_option("--n", exact.n, "Permutation size")->capture_default_str();
  exact_cmd->add_option("--m", exact.m, "Fixed-point count")->capture_default_str();
  exact_cmd->add_option("--kind", exact.kind, "point | cumulative | tail (more than m) | limit")
      ->check(CLI::IsMember({"point", "cumulative", "tail", "limit"}))
      ->capture_default_str();
  exact_cmd->add_option("--format", exact.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  exact_cmd->add_flag("--full", exact.full, "Print long rationals in full in text output");

  std::uint32_t census_n = 8;
  std::string census_format = "text";
  auto* census_cmd = app.add_subcommand("census", "Exhaustive fixed-point census of S_n (n <= 10)");
  census_cmd->add_option("--n", census_n, "Permutation size, at most 10")->capture_default_str();
  census_cmd->add_option("--format", census_format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  SampleOptions sample;
  sample.seed = seed;
  sample.common.format = "csv";
  auto* sample_cmd = app.add_subcommand("sample", "Empirical fixed-point histogram vs exact theory");
  sample_cmd->add_option("--n", sample.n, "Permutation size")->capture_default_str();
  sample_cmd->add_option("--samples", sample.samples, "Random permutations")->capture_default_str();
  sample_cmd->add_option("--seed", sample.seed, seed_help);
  sample_cmd->add_option("--format", sample.common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sample_cmd->add_option("--out", sample.common.out_path, "Output file (default stdout)");
  add_execution_options(*sample_cmd, sample.common);

  SaOptions sa;
  sa.seed = seed;
  auto* sa_cmd = app.add_subcommand("sa", "Single annealing run on a random isomorphic pair");
  sa_cmd->add_option("--n", sa.n, "Vertices per graph")->capture_default_str();
  sa_cmd->add_option("--edge-prob", sa.edge_prob, "Erdos-Renyi edge probability")
      ->capture_default_str();
  sa_cmd->add_option("--relabel", sa.relabel, "Ground truth: identity | random")
      ->check(CLI::IsMember({"identity", "random"}))
      ->capture_default_str();
  sa_cmd->add_option("--seed", sa.seed, seed_help);
  sa_cmd->add_option("--steps", sa.steps, "Proposals (default 100 n)");
  sa_cmd->add_option("--epoch", sa.epoch, "Proposals per temperature level (default n)");
  sa_cmd->add_option("--cooling", sa.cooling, "Geometric cooling factor")->capture_default_str();
  sa_cmd->add_option("--t0", sa.t0, "Initial temperature or 'auto'")->capture_default_str();
  sa_cmd->add_option("--target-acceptance", sa.target_acceptance,
                     "Uphill acceptance targeted by auto T0")
      ->capture_default_str();
  sa_cmd->add_option("--operator", sa.op, "swap | insertion | inversion | scramble")
      ->check(CLI::IsMember({"swap", "insertion", "inversion", "scramble"}))
      ->capture_default_str();
  sa_cmd->add_option("--objective", sa.objective, "structural | oracle")
      ->check(CLI::IsMember({"structural", "oracle"}))
      ->capture_default_str();
  sa_cmd->add_option("--trace", sa.trace_path, "Write per-epoch trace CSV here");
  sa_cmd->add_option("--graph-in", sa.graph_in, "Read the graph pair from this file");
  sa_cmd->add_option("--graph-out", sa.graph_out, "Write the graph pair to this file");
  sa_cmd->add_option("--format", sa.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  sa_cmd->add_option("--restarts", sa.restarts, "Extra schedules from fresh states (off)")
      ->capture_default_str();
  sa_cmd->add_option("--reheat-after", sa.reheat_after,
                     "Reset T to T0 after this many epochs without a new best (0 = off)")
      ->capture_default_str();

  Table1Params table1;
  table1.master_seed = seed;
  CommonOptions table1_common;
  table1_common.format = "csv";
  auto* table1_cmd = app.add_subcommand("table1", "Tail census of uniform random permutations");
  table1_cmd->add_option("--n-list", table1.n_values, "Comma-separated sizes")
      ->delimiter(',')
      ->capture_default_str();
  table1_cmd->add_option("--samples", table1.samples, "Permutations per size")
      ->capture_default_str();
  table1_cmd->add_option("--threshold", table1.threshold, "Count permutations with MORE fixed points")
      ->capture_default_str();
  table1_cmd->add_option("--seed", table1.master_seed, seed_help);
  table1_cmd->add_option("--format", table1_common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  table1_cmd->add_option("--out", table1_common.out_path, "Output file (default stdout)");
  table1_cmd->add_flag("--timing", table1_common.timing, "Include wall-clock time in JSON metadata");
  add_execution_options(*table1_cmd, table1_common);

  Table2Options table2;
  table2.params.master_seed = seed;
  table2.common.format = "csv";
  auto* table2_cmd = app.add_subcommand("table2", "Annealing success rate on random isomorphic pairs");
  table2_cmd->add_option("--n-list", table2.params.n_values, "Comma-separated sizes")
      ->delimiter(',')
      ->capture_default_str();
  table2_cmd->add_option("--runs", table2.runs,
                         "Runs per size (default 1000 for n <= 100, else 200)");
  table2_cmd->add_option("--threshold", table2.params.threshold,
                         "Count runs with MORE correct matches")
      ->capture_default_str();
  table2_cmd->add_option("--objective", table2.objective, "structural | oracle")
      ->check(CLI::IsMember({"structural", "oracle"}))
      ->capture_default_str();
  table2_cmd->add_option("--operator", table2.op, "swap | insertion | inversion | scramble")
      ->check(CLI::IsMember({"swap", "insertion", "inversion", "scramble"}))
      ->capture_default_str();
  table2_cmd->add_option("--steps", table2.steps, "Proposals per run (default 100 n)");
  table2_cmd->add_option("--cooling", table2.params.settings.cooling_factor, "Cooling factor")
      ->capture_default_str();
  table2_cmd->add_option("--epoch", table2.epoch, "Proposals per temperature (default n)");
  table2_cmd->add_option("--t0", table2.t0, "Initial temperature or 'auto'")->capture_default_str();
  table2_cmd->add_option("--target-acceptance", table2.params.settings.target_acceptance,
                         "Uphill acceptance targeted by auto T0")
      ->capture_default_str();
  table2_cmd->add_option("--edge-prob", table2.params.settings.edge_probability,
                         "Erdos-Renyi edge probability")
      ->capture_default_str();
  table2_cmd->add_option("--relabel", table2.relabel, "Ground truth: identity | random")
      ->check(CLI::IsMember({"identity", "random"}))
      ->capture_default_str();
  table2_cmd->add_option("--seed", table2.params.master_seed, seed_help);
  table2_cmd->add_option("--format", table2.common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  table2_cmd->add_option("--out", table2.common.out_path, "Output file (default stdout)");
  table2_cmd->add_flag("--timing", table2.common.timing, "Include wall-clock time in JSON metadata");
  add_execution_options(*table2_cmd, table2.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*exact_cmd) return cmd_exact(exact, out);
    if (*census_cmd) return cmd_census(census_n, census_format, out, err);
    if (*sample_cmd) return cmd_sample(sample, out, err);
    if (*sa_cmd) return cmd_sa(sa, out);
    if (*table1_cmd) return cmd_table1(table1, table1_common, out, err);
    if (*table2_cmd) return cmd_table2(table2, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace gmatch
