#include "gmatch/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace gmatch {
namespace {

// JSON number carrying exactly the digits printed in the CSV.
nlohmann::json sig6(double value) {
  if (!std::isfinite(value)) return format_sig6(value);
  return std::stod(format_sig6(value));
}

nlohmann::json metadata_json(const ReportMetadata& metadata, bool include_timing) {
  nlohmann::json out = {
      {"master_seed", metadata.master_seed},
      {"generator", metadata.generator},
      {"version", metadata.version},
  };
  if (include_timing) out["wall_clock_seconds"] = sig6(metadata.duration_seconds);
  return out;
}

std::string exact_fraction(std::uint64_t count, std::uint64_t total) {
  return make_ratio(count, total).to_string();
}

nlohmann::json settings_json(const AnnealSettings& settings) {
  nlohmann::json out = {
      {"cooling_factor", sig6(settings.cooling_factor)},
      {"t0_mode", settings.t0_mode()},
      {"target_acceptance", sig6(settings.target_acceptance)},
      {"operator", std::string(to_string(settings.op))},
      {"objective", std::string(to_string(settings.objective))},
      {"edge_prob", sig6(settings.edge_probability)},
      {"relabel", std::string(to_string(settings.relabel))},
  };
  out["steps"] = settings.steps ? nlohmann::json(*settings.steps) : nlohmann::json("100n");
  out["epoch_length"] =
      settings.epoch_length ? nlohmann::json(*settings.epoch_length) : nlohmann::json("n");
  return out;
}

}  // namespace

std::string format_sig6(double value) {
  char text[40];
  std::snprintf(text, sizeof text, "%.6g", value);
  return text;
}

void write_table1_csv(std::ostream& out, const ExperimentReport<Table1Row>& report) {
  out << "n,samples,threshold,count,fraction,exact_tail,z_score,master_seed\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.samples << ',' << row.threshold << ',' << row.count << ','
        << format_sig6(row.fraction) << ',' << format_sig6(row.exact_tail_value) << ','
        << format_sig6(row.z_score) << ',' << report.metadata.master_seed << '\n';
  }
}

nlohmann::json table1_json(const ExperimentReport<Table1Row>& report, const Table1Params& params,
                           bool include_timing) {
  auto metadata = metadata_json(report.metadata, include_timing);
  metadata["config"] = {
      {"n_values", params.n_values},
      {"samples", params.samples},
      {"threshold", params.threshold},
      {"criterion", "fixed points > threshold"},
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({
        {"n", row.n},
        {"samples", row.samples},
        {"threshold", row.threshold},
        {"count", row.count},
        {"fraction", sig6(row.fraction)},
        {"fraction_exact", exact_fraction(row.count, row.samples)},
        {"exact_tail", sig6(row.exact_tail_value)},
        {"exact_tail_exact", row.exact_tail.to_string()},
        {"z_score", sig6(row.z_score)},
        {"master_seed", report.metadata.master_seed},
    });
  }
  return {{"metadata", metadata}, {"rows", rows}};
}

void write_table2_csv(std::ostream& out, const ExperimentReport<Table2Row>& report) {
  out << "n,runs,threshold,success_count,success_fraction,objective,operator,steps,epoch_length,"
         "cooling_factor,t0_mode,edge_prob,master_seed\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.runs << ',' << row.threshold << ',' << row.success_count << ','
        << format_sig6(row.success_fraction) << ',' << to_string(row.objective) << ','
        << to_string(row.op) << ',' << row.steps << ',' << row.epoch_length << ','
        << format_sig6(row.cooling_factor) << ',' << row.t0_mode << ','
        << format_sig6(row.edge_probability) << ',' << report.metadata.master_seed << '\n';
  }
}

nlohmann::json table2_json(const ExperimentReport<Table2Row>& report, const Table2Params& params,
                           bool include_timing) {
  auto metadata = metadata_json(report.metadata, include_timing);
  metadata["config"] = settings_json(params.settings);
  metadata["config"]["n_values"] = params.n_values;
  metadata["config"]["runs"] =
      params.runs ? nlohmann::json(*params.runs) : nlohmann::json("1000 if n<=100 else 200");
  metadata["config"]["threshold"] = params.threshold;
  metadata["config"]["criterion"] = "correct matches > threshold";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({
        {"n", row.n},
        {"runs", row.runs},
        {"threshold", row.threshold},
        {"success_count", row.success_count},
        {"success_fraction", sig6(row.success_fraction)},
        {"success_fraction_exact", exact_fraction(row.success_count, row.runs)},
        {"objective", std::string(to_string(row.objective))},
        {"operator", std::string(to_string(row.op))},
        {"steps", row.steps},
        {"epoch_length", row.epoch_length},
        {"cooling_factor", sig6(row.cooling_factor)},
        {"t0_mode", row.t0_mode},
        {"edge_prob", sig6(row.edge_probability)},
        {"master_seed", report.metadata.master_seed},
    });
  }
  return {{"metadata", metadata}, {"rows", rows}};
}

void write_comparison_csv(std::ostream& out, const Comparison& comparison) {
  out << "n,samples,m,count,empirical,exact,z_score,master_seed\n";
  for (const auto& bin : comparison.bins) {
    out << comparison.n << ',' << comparison.samples << ',' << bin.m << ',' << bin.count << ','
        << format_sig6(bin.empirical) << ',' << format_sig6(bin.exact_value) << ','
        << format_sig6(bin.z_score) << ',' << comparison.master_seed << '\n';
  }
}

nlohmann::json comparison_json(const Comparison& comparison) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& bin : comparison.bins) {
    bins.push_back({
        {"m", bin.m},
        {"count", bin.count},
        {"empirical", sig6(bin.empirical)},
        {"empirical_exact", exact_fraction(bin.count, comparison.samples)},
        {"exact", sig6(bin.exact_value)},
        {"exact_rational", bin.exact.to_string()},
        {"z_score", sig6(bin.z_score)},
    });
  }
  return {
      {"metadata",
       {{"master_seed", comparison.master_seed},
        {"generator", std::string(kGeneratorId)},
        {"version", std::string(kVersion)}}},
      {"n", comparison.n},
      {"samples", comparison.samples},
      {"bins", bins},
  };
}

}  // namespace gmatch
