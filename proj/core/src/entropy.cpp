#include "estent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "estent/errors.hpp"
#include "estent/random.hpp"

namespace estent {

std::string to_string(EntropyCase c) {
    switch (c) {
        case EntropyCase::I: return "i";
        case EntropyCase::II: return "ii";
        case EntropyCase::III: return "iii";
        case EntropyCase::IV: return "iv";
    }
    return "?";
}

EntropyCase entropy_case_for(StabilityKind kind) {
    switch (kind) {
        case StabilityKind::Practical: return EntropyCase::I;
        case StabilityKind::PracticalExponential: return EntropyCase::II;
        case StabilityKind::Asymptotic: return EntropyCase::III;
        case StabilityKind::Exponential: return EntropyCase::IV;
    }
    return EntropyCase::I;
}

bool uses_alpha(EntropyCase c) { return c == EntropyCase::II || c == EntropyCase::IV; }

namespace {

double exponent_for(EntropyCase c, double mu_bar, std::optional<double> alpha) {
    if (!uses_alpha(c)) {
        return std::max(mu_bar, 0.0);
    }
    if (!alpha || !(*alpha > 0.0)) {
        throw ConfigError("entropy case (" + to_string(c) + ") requires alpha > 0");
    }
    return std::max(mu_bar, -*alpha) + *alpha;
}

}  // namespace

double upper_bound(EntropyCase c, double mu_bar, std::optional<double> alpha, int n) {
    return exponent_for(c, mu_bar, alpha) * n;
}

TraceInfimum trace_infimum(const SystemModel& model, double horizon,
                           const TraceSampling& sampling) {
    TraceInfimum out;
    out.value = std::numeric_limits<double>::infinity();
    const auto x0s = box_grid(model.initial_set(), sampling.state_points_per_axis);
    const auto dgrid = box_grid(model.disturbance_set(), sampling.disturbance_points_per_axis);
    const double hold = sampling.hold_steps * sampling.step;

    std::vector<DisturbanceSignal> signals;
    for (const Vec& d : dgrid) {
        signals.push_back(DisturbanceSignal::constant(d));
    }
    for (int s = 0; s < sampling.random_streams; ++s) {
        Rng rng(sampling.seed, static_cast<std::uint64_t>(s));
        signals.push_back(random_disturbance(rng, model.disturbance_set(), hold, horizon));
    }

    for (const Vec& x0 : x0s) {
        for (const DisturbanceSignal& signal : signals) {
            Trajectory traj;
            try {
                traj = integrate(model, x0, signal, horizon, sampling.step);
            } catch (const IntegrationError&) {
                out.finite = false;
                continue;
            }
            for (Eigen::Index i = 0; i < traj.states.cols(); ++i) {
                const Vec x = traj.states.col(i);
                for (const Vec& d : dgrid) {
                    const double tr = model.jacobian(x, d).trace();
                    if (!std::isfinite(tr)) {
                        out.finite = false;
                        continue;
                    }
                    out.value = std::min(out.value, tr);
                    ++out.samples;
                }
            }
        }
    }
    if (!out.finite) {
        out.value = -std::numeric_limits<double>::infinity();
    }
    return out;
}

double lower_bound(EntropyCase c, const TraceInfimum& trace_inf, double mu_bar,
                   std::optional<double> alpha, int n) {
    if (!trace_inf.finite) {
        return -std::numeric_limits<double>::infinity();
    }
    if (!uses_alpha(c)) {
        return trace_inf.value;
    }
    return exponent_for(c, mu_bar, alpha) * n + trace_inf.value;
}

EntropyCurve empirical_entropy_curve(const Box& initial_set, const StabilityClass& stability,
                                     double mu_bar, const std::vector<double>& horizons,
                                     std::uint64_t cap) {
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        if (!(horizons[i] > 0.0) || (i > 0 && !(horizons[i] > horizons[i - 1]))) {
            throw ConfigError("entropy curve horizons must be positive and increasing");
        }
    }
    EntropyCurve curve;
    curve.epsilon = stability.epsilon;
    const EntropyCase c = entropy_case_for(stability.kind);
    const std::optional<double> alpha =
        uses_alpha(c) ? std::optional<double>(stability.alpha) : std::nullopt;
    curve.analytic_limit =
        upper_bound(c, mu_bar, alpha, static_cast<int>(initial_set.dim()));
    for (double T : horizons) {
        const double delta = resolution(stability, mu_bar, T);
        std::uint64_t count = 0;
        try {
            count = covering_number(initial_set, delta, cap);
        } catch (const CapacityError&) {
            curve.truncated = true;
            break;
        }
        curve.points.push_back({T, delta, count, std::log(static_cast<double>(count)) / T});
    }
    return curve;
}

double curve_gap_bound(int n, double epsilon, double horizon) {
    return (n * std::log(1.0 / (2.0 * epsilon)) + n * std::log(2.0)) / horizon;
}

EntropyReport make_entropy_report(const SystemModel& model, const StabilityClass& stability,
                                  double mu_bar, const std::vector<double>& horizons,
                                  const std::vector<double>& epsilon_ladder,
                                  const TraceSampling& sampling, std::uint64_t cap) {
    if (horizons.empty()) {
        throw ConfigError("entropy report needs at least one horizon");
    }
    if (epsilon_ladder.empty()) {
        throw ConfigError("entropy report needs at least one epsilon");
    }
    StabilityClass checked = stability;
    checked.epsilon = epsilon_ladder.front();
    checked.validate();
    EntropyReport report;
    report.entropy_case = entropy_case_for(stability.kind);
    report.mu_bar = mu_bar;
    report.c_bar = std::max(mu_bar, 0.0);
    report.n = model.state_dim();
    if (uses_alpha(report.entropy_case)) {
        report.alpha = stability.alpha;
        report.m_constant = std::max(mu_bar, -stability.alpha);
    }
    report.upper = upper_bound(report.entropy_case, mu_bar, report.alpha, report.n);
    report.trace_horizon = *std::max_element(horizons.begin(), horizons.end());
    report.trace_inf = trace_infimum(model, report.trace_horizon, sampling);
    report.lower =
        lower_bound(report.entropy_case, report.trace_inf, mu_bar, report.alpha, report.n);
    for (double eps : epsilon_ladder) {
        StabilityClass s = stability;
        s.epsilon = eps;
        report.curves.push_back(
            empirical_entropy_curve(model.initial_set(), s, mu_bar, horizons, cap));
    }
    return report;
}

}  // namespace estent
