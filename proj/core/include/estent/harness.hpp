#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "estent/report.hpp"
#include "estent/scenario.hpp"

namespace estent {

enum class Mode { VerifyApprox, Entropy, Estimate, All };

std::string to_string(Mode mode);
/// "verify-approx", "entropy", "estimate" or "all".
Mode parse_mode(const std::string& text);

inline constexpr int kExitPass = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfig = 2;

struct HarnessResult {
    int exit_code = kExitPass;
    std::vector<PropertyResult> properties;
    std::vector<std::filesystem::path> files;
    std::vector<std::string> violated() const;
};

std::string tool_version();

/// Runs the requested analyses and writes CSVs plus summary.txt into
/// scenario.output_dir. Exit code 0 iff every checked property held.
HarnessResult run_scenario(const Scenario& scenario, Mode mode);

}  // namespace estent
