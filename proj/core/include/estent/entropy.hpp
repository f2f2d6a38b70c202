#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "estent/approx_sets.hpp"
#include "estent/dynamics.hpp"

namespace estent {

/// Entropy bound cases, keyed by the assumed stability property:
///   I   (beta, K, eps)-practical        -> 2eps-practical entropy
///   II  (alpha, K, eps)-practical exp.  -> eps-practical entropy
///   III (beta, K)-asymptotic            -> eps-practical entropy
///   IV  (alpha, K)-exponential          -> asymptotic entropy
/// All rates are in nats per unit time.
enum class EntropyCase { I, II, III, IV };

std::string to_string(EntropyCase c);
EntropyCase entropy_case_for(StabilityKind kind);
bool uses_alpha(EntropyCase c);

/// I, III: max(mu_bar, 0) n.  II, IV: (max(mu_bar, -alpha) + alpha) n.
double upper_bound(EntropyCase c, double mu_bar, std::optional<double> alpha, int n);

struct TraceSampling {
    int state_points_per_axis = 5;
    int disturbance_points_per_axis = 3;
    /// Extra trajectories under i.i.d. switching disturbances.
    int random_streams = 4;
    std::uint64_t seed = 0;
    double step = 1e-3;
    int hold_steps = 10;
};

struct TraceInfimum {
    /// Sampled minimum: an over-estimate of the true infimum.
    double value = 0.0;
    /// False when a non-finite trace or state was met (bound is then -inf).
    bool finite = true;
    std::size_t samples = 0;
};

/// min of tr f_x(x, d) over sampled reachable states x in R_{K,D}[0, T]
/// and a grid of d in D.
TraceInfimum trace_infimum(const SystemModel& model, double horizon,
                           const TraceSampling& sampling = {});

/// I, III: trace_inf.  II, IV: (max(mu_bar, -alpha) + alpha) n + trace_inf.
/// -inf when the trace sampling was not finite.
double lower_bound(EntropyCase c, const TraceInfimum& trace_inf, double mu_bar,
                   std::optional<double> alpha, int n);

struct CurvePoint {
    double horizon = 0.0;
    double delta = 0.0;
    std::uint64_t cardinality = 0;
    double rate = 0.0;  // (1/T) log N, nats
};

struct EntropyCurve {
    double epsilon = 0.0;
    std::vector<CurvePoint> points;
    double analytic_limit = 0.0;
    /// Set when a horizon hit the cover cardinality cap; later horizons dropped.
    bool truncated = false;
};

EntropyCurve empirical_entropy_curve(const Box& initial_set, const StabilityClass& stability,
                                     double mu_bar, const std::vector<double>& horizons,
                                     std::uint64_t cap = kDefaultCoverCap);

/// Bound on |rate(T) - limit| for a box K whose widths are all <= 1 and
/// eps <= 1/2: (n log(1/(2 eps)) + n log 2) / T.
double curve_gap_bound(int n, double epsilon, double horizon);

struct EntropyReport {
    EntropyCase entropy_case = EntropyCase::I;
    double upper = 0.0;
    double lower = 0.0;
    TraceInfimum trace_inf;
    double mu_bar = 0.0;
    double c_bar = 0.0;
    std::optional<double> alpha;
    std::optional<double> m_constant;  // max(mu_bar, -alpha) when alpha is set
    int n = 0;
    double trace_horizon = 0.0;
    std::vector<EntropyCurve> curves;

    bool consistent() const { return lower <= upper; }
};

/// Bounds plus one empirical curve per epsilon in `epsilon_ladder`. The trace
/// infimum is taken over the largest horizon in `horizons`.
EntropyReport make_entropy_report(const SystemModel& model, const StabilityClass& stability,
                                  double mu_bar, const std::vector<double>& horizons,
                                  const std::vector<double>& epsilon_ladder,
                                  const TraceSampling& sampling = {},
                                  std::uint64_t cap = kDefaultCoverCap);

inline double nats_to_bits(double nats) { return nats / std::log(2.0); }

}  // namespace estent
