#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "estent/approx_sets.hpp"
#include "estent/entropy.hpp"
#include "estent/estimator.hpp"

namespace estent {

/// 17 significant digits, so parsing the text recovers the exact double.
std::string format_real(double value);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& table);
void write_text(const std::filesystem::path& path, const std::string& text);

/// run_id, k, t_start, delta_k, N_k, bits, cum_bits, quant_err,
/// frame_max_err, thm3_bound, violation_flag
Table runlog_table(const std::vector<RunLog>& logs);
/// seed, trial, x0_1..x0_n, worst_margin, violated
Table verify_table(const std::vector<VerifyReport>& reports, int state_dim);
/// epsilon, T, delta, N, rate_nats, rate_bits, analytic_limit
Table entropy_curve_table(const EntropyReport& report);
/// Structured (YAML) record of bounds, constants and case.
std::string entropy_summary(const EntropyReport& report);

struct PropertyResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct Summary {
    std::string tool_version;
    std::string mode;
    std::vector<std::pair<std::string, std::string>> facts;
    std::vector<PropertyResult> properties;
    std::string scenario_yaml;
};

/// One "PASS|FAIL <property>: <detail>" line per property, then facts and
/// the resolved scenario.
std::string render_summary(const Summary& summary);

}  // namespace estent
