#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "estent/approx_sets.hpp"
#include "estent/cover.hpp"
#include "estent/errors.hpp"
#include "estent/systems.hpp"

namespace estent {

/// Box bounds as written in a scenario file (kept as lo/hi for exact echo).
struct Bounds {
    std::vector<double> lo;
    std::vector<double> hi;
    bool operator==(const Bounds&) const = default;
    Box to_box() const;
};

/// Every knob of a run. After load_scenario() all fields hold resolved values;
/// the optionals that stay empty mean "derive from the model" (mu_bar, M)
/// or "required but absent" (alpha).
struct Scenario {
    // model
    std::string model = "scalar-contracting";
    ParamMap params;
    std::optional<Bounds> initial_set;
    std::optional<Bounds> disturbance_set;
    // stability class
    StabilityKind kind = StabilityKind::Practical;
    std::optional<double> alpha;
    double epsilon = 0.1;
    double beta_gain = 1.0;
    double beta_lambda = 1.0;
    // horizons
    double period = 1.0;
    std::uint32_t frames = 50;
    std::vector<double> curve_horizons{1.0, 2.0, 5.0, 10.0, 20.0};
    std::vector<double> epsilon_ladder{0.1, 0.01, 0.001};
    // integrator
    double step = 1e-3;
    int hold_steps = 10;
    // analysis
    std::optional<double> mu_bar;
    int mu_grid = 21;
    std::optional<double> m_constant;
    double resolution_scale = 1.0;
    std::uint64_t cover_cap = kDefaultCoverCap;
    int trace_state_points = 5;
    int trace_disturbance_points = 3;
    int trace_random_streams = 4;
    // sweeps
    std::vector<std::uint64_t> seeds{0};
    std::uint64_t verify_trials = 500;
    std::uint64_t estimate_runs = 200;
    // output
    std::string output_dir = "out";

    bool operator==(const Scenario&) const = default;
};

/// Parse or validation failure; `problems` lists every violated constraint.
class ScenarioError : public ConfigError {
public:
    explicit ScenarioError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// YAML text -> validated scenario. `origin` prefixes line:column locations.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);
/// Canonical YAML with every field present; doubles use 17 significant digits.
std::string save_scenario(const Scenario& scenario);

/// Empty when valid.
std::vector<std::string> validate_scenario(const Scenario& scenario);

/// The benchmark with the scenario's K and D applied.
BenchmarkSystem build_system(const Scenario& scenario);
StabilityClass build_stability(const Scenario& scenario);

}  // namespace estent
