#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "estent/dynamics.hpp"

namespace estent {

using ParamMap = std::map<std::string, double>;

/// A registered benchmark system plus an analytic bound on mu_inf(df/dx).
///
/// `certified_mu_bar` holds wherever |x|_inf <= `certified_radius`
/// (infinity means globally) for every d in the default D.
struct BenchmarkSystem {
    SystemModel model;
    double certified_mu_bar;
    double certified_radius = std::numeric_limits<double>::infinity();
};

/// Registered names: "scalar-contracting", "linear-2d", "cubic",
/// "vanderpol-damped". Unknown parameters or names raise ConfigError.
///
///   scalar-contracting  dx = -a x + d                       {a=1}
///   linear-2d           dx = A x + d                        {a11=-2,a12=1,a21=1,a22=-2}
///   cubic               dx = -a x - x^3 + d                 {a=0}
///   vanderpol-damped    dx1 = x2,
///                       dx2 = -x1 - c (1 + x1^2) x2 + d      {c=1}
BenchmarkSystem make_benchmark(const std::string& name, const ParamMap& params = {});

std::vector<std::string> benchmark_names();

/// Default parameter values for a registered benchmark.
ParamMap benchmark_defaults(const std::string& name);

}  // namespace estent
