#pragma once

// CSV and JSON renderings of experiment reports. Floats are written with six
// significant digits in both formats so the two encode identical values.
// Wall-clock time is only emitted on request; without it, equal inputs give
// byte-identical output.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "gmatch/experiments.hpp"

namespace gmatch {

/// printf("%.6g").
std::string format_sig6(double value);

void write_table1_csv(std::ostream& out, const ExperimentReport<Table1Row>& report);
nlohmann::json table1_json(const ExperimentReport<Table1Row>& report, const Table1Params& params,
                           bool include_timing = false);

void write_table2_csv(std::ostream& out, const ExperimentReport<Table2Row>& report);
nlohmann::json table2_json(const ExperimentReport<Table2Row>& report, const Table2Params& params,
                           bool include_timing = false);

void write_comparison_csv(std::ostream& out, const Comparison& comparison);
nlohmann::json comparison_json(const Comparison& comparison);

}  // namespace gmatch
