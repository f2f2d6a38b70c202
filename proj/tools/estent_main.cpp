// estent: run a scenario file through the verification, entropy and
// estimation analyses.
//
//   estent all --scenario scenarios/scalar_contracting.yaml --out out/
//   ESTENT_SEED=0-3 estent estimate --scenario s.yaml
//
// Every flag can also be set through an ESTENT_* environment variable; a
// flag on the command line wins over the environment.

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "estent/harness.hpp"

namespace {

std::uint64_t parse_u64(const std::string& text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw estent::ConfigError("bad seed '" + text + "'");
    }
    return value;
}

// "0-3,7" -> {0, 1, 2, 3, 7}
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item.empty()) {
            throw estent::ConfigError("empty entry in seed list '" + text + "'");
        }
        if (const auto dash = item.find('-'); dash != std::string::npos) {
            const auto lo = parse_u64(item.substr(0, dash));
            const auto hi = parse_u64(item.substr(dash + 1));
            if (hi < lo || hi - lo > 1'000'000) {
                throw estent::ConfigError("bad seed range '" + item + "'");
            }
            for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            seeds.push_back(parse_u64(item));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-resolution state estimation and entropy analysis for "
                 "incrementally stable systems"};
    app.set_version_flag("--version", estent::tool_version());

    std::string scenario_path;
    std::string verb;
    std::string mode_flag;
    std::optional<std::string> out_dir;
    std::optional<std::string> seeds;
    std::optional<std::uint32_t> frames;
    std::optional<double> step;

    app.add_option("verb", verb, "verify-approx, entropy, estimate or all");
    app.add_option("--scenario,-s", scenario_path, "Scenario YAML file")
        ->required()
        ->envname("ESTENT_SCENARIO");
    app.add_option("--mode,-m", mode_flag, "Same as the positional verb")
        ->envname("ESTENT_MODE");
    app.add_option("--out,-o", out_dir, "Output directory")->envname("ESTENT_OUT");
    app.add_option("--seed", seeds, "Seed list, e.g. 0-3,7")->envname("ESTENT_SEED");
    app.add_option("--frames", frames, "Estimator frames per run")->envname("ESTENT_FRAMES");
    app.add_option("--step", step, "Integrator step")->envname("ESTENT_STEP");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : estent::kExitConfig;
    }

    try {
        if (!verb.empty() && !mode_flag.empty() && verb != mode_flag) {
            throw estent::ConfigError("positional mode '" + verb + "' conflicts with --mode '" +
                                      mode_flag + "'");
        }
        const std::string mode_text = !verb.empty() ? verb : (!mode_flag.empty() ? mode_flag : "all");
        const estent::Mode mode = estent::parse_mode(mode_text);

        estent::Scenario scenario = estent::load_scenario(scenario_path);
        if (out_dir) scenario.output_dir = *out_dir;
        if (seeds) scenario.seeds = parse_seed_list(*seeds);
        if (frames) scenario.frames = *frames;
        if (step) scenario.step = *step;

        const estent::HarnessResult result = estent::run_scenario(scenario, mode);
        for (const auto& p : result.properties) {
            std::cout << (p.passed ? "PASS " : "FAIL ") << p.name << ": " << p.detail << '\n';
        }
        std::cout << "wrote " << result.files.size() << " files to " << scenario.output_dir
                  << '\n';
        if (result.exit_code != estent::kExitPass) {
            std::cerr << "violated properties:";
            for (const auto& name : result.violated()) std::cerr << ' ' << name;
            std::cerr << '\n';
        }
        return result.exit_code;
    } catch (const estent::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return estent::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return estent::kExitConfig;
    }
}
