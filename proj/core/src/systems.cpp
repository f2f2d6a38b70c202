#include "estent/systems.hpp"

#include <algorithm>
#include <cmath>

#include "estent/errors.hpp"
#include "estent/matrix_measure.hpp"

namespace estent {

namespace {

constexpr double kDefaultDisturbance = 0.05;

ParamMap resolve(const std::string& name, const ParamMap& defaults, const ParamMap& given) {
    ParamMap out = defaults;
    for (const auto& [key, value] : given) {
        if (!defaults.contains(key)) {
            throw ConfigError("benchmark '" + name + "': unknown parameter '" + key + "'");
        }
        if (!std::isfinite(value)) {
            throw ConfigError("benchmark '" + name + "': parameter '" + key +
                              "' must be finite");
        }
        out[key] = value;
    }
    return out;
}

Box symmetric(int dim, double radius) {
    return Box::ball(Vec::Zero(dim), radius);
}

BenchmarkSystem scalar_contracting(const ParamMap& p) {
    const double a = p.at("a");
    SystemModel model(
        "scalar-contracting", 1, 1,
        [a](const Vec& x, const Vec& d) { return Vec{{-a * x[0] + d[0]}}; },
        [a](const Vec&, const Vec&) { return Mat{{-a}}; },
        symmetric(1, 1.0), symmetric(1, kDefaultDisturbance));
    return {std::move(model), -a};
}

BenchmarkSystem linear_2d(const ParamMap& p) {
    const Mat a{{p.at("a11"), p.at("a12")}, {p.at("a21"), p.at("a22")}};
    SystemModel model(
        "linear-2d", 2, 2, [a](const Vec& x, const Vec& d) -> Vec { return a * x + d; },
        [a](const Vec&, const Vec&) { return a; }, symmetric(2, 1.0),
        symmetric(2, kDefaultDisturbance));
    return {std::move(model), matrix_measure_inf(a)};
}

BenchmarkSystem cubic(const ParamMap& p) {
    const double a = p.at("a");
    SystemModel model(
        "cubic", 1, 1,
        [a](const Vec& x, const Vec& d) {
            return Vec{{-a * x[0] - x[0] * x[0] * x[0] + d[0]}};
        },
        [a](const Vec& x, const Vec&) { return Mat{{-a - 3.0 * x[0] * x[0]}}; },
        symmetric(1, 1.0), symmetric(1, kDefaultDisturbance));
    // -a - 3x^2 <= -a everywhere
    return {std::move(model), -a};
}

BenchmarkSystem vanderpol_damped(const ParamMap& p) {
    const double c = p.at("c");
    if (!(c > 0.0)) {
        throw ConfigError("benchmark 'vanderpol-damped': parameter 'c' must be positive");
    }
    SystemModel model(
        "vanderpol-damped", 2, 1,
        [c](const Vec& x, const Vec& d) {
            return Vec{{x[1], -x[0] - c * (1.0 + x[0] * x[0]) * x[1] + d[0]}};
        },
        [c](const Vec& x, const Vec&) {
            return Mat{{0.0, 1.0},
                       {-1.0 - 2.0 * c * x[0] * x[1], -c * (1.0 + x[0] * x[0])}};
        },
        symmetric(2, 1.0), symmetric(1, kDefaultDisturbance));
    // Row 2 of the Jacobian on |x|_inf <= R:
    //   -c(1 + x1^2) + |1 + 2c x1 x2| <= 1 - c + c(2R|x1| - x1^2) <= 1 - c + cR^2.
    // Row 1 contributes 1. Trajectories from K = [-1,1]^2 with |d| <= 0.05
    // stay inside R = 1.5 (x1^2 + x2^2 grows only while |x2| < |d|/c).
    constexpr double radius = 1.5;
    return {std::move(model), std::max(1.0, 1.0 - c + c * radius * radius), radius};
}

}  // namespace

std::vector<std::string> benchmark_names() {
    return {"scalar-contracting", "linear-2d", "cubic", "vanderpol-damped"};
}

ParamMap benchmark_defaults(const std::string& name) {
    if (name == "scalar-contracting") return {{"a", 1.0}};
    if (name == "linear-2d") return {{"a11", -2.0}, {"a12", 1.0}, {"a21", 1.0}, {"a22", -2.0}};
    if (name == "cubic") return {{"a", 0.0}};
    if (name == "vanderpol-damped") return {{"c", 1.0}};
    throw ConfigError("unknown benchmark '" + name + "'");
}

BenchmarkSystem make_benchmark(const std::string& name, const ParamMap& params) {
    const ParamMap p = resolve(name, benchmark_defaults(name), params);
    if (name == "scalar-contracting") return scalar_contracting(p);
    if (name == "linear-2d") return linear_2d(p);
    if (name == "cubic") return cubic(p);
    return vanderpol_damped(p);
}

}  // namespace estent
