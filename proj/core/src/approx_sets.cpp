#include "estent/approx_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "estent/errors.hpp"
#include "estent/matrix_measure.hpp"
#include "estent/random.hpp"

namespace estent {

std::string to_string(StabilityKind kind) {
    switch (kind) {
        case StabilityKind::Practical: return "practical";
        case StabilityKind::PracticalExponential: return "practical-exponential";
        case StabilityKind::Asymptotic: return "asymptotic";
        case StabilityKind::Exponential: return "exponential";
    }
    return "?";
}

StabilityKind parse_stability_kind(const std::string& text) {
    for (auto kind : {StabilityKind::Practical, StabilityKind::PracticalExponential,
                      StabilityKind::Asymptotic, StabilityKind::Exponential}) {
        if (text == to_string(kind)) {
            return kind;
        }
    }
    throw ConfigError("unknown stability kind '" + text +
                      "' (expected practical, practical-exponential, asymptotic or "
                      "exponential)");
}

bool is_exponential(StabilityKind kind) {
    return kind == StabilityKind::PracticalExponential || kind == StabilityKind::Exponential;
}

bool shares_disturbance(StabilityKind kind) {
    return kind == StabilityKind::Asymptotic || kind == StabilityKind::Exponential;
}

RateFunction::RateFunction(double lambda, double gain) : lambda_(lambda), gain_(gain) {
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
        throw ConfigError("rate function: lambda must be positive");
    }
    if (!(gain_ >= 1.0) || !std::isfinite(gain_)) {
        throw ConfigError("rate function: gain C must be >= 1");
    }
}

void StabilityClass::validate() const {
    if (is_exponential(kind) && !(alpha > 0.0)) {
        throw ConfigError("stability.alpha must be positive for kind " + to_string(kind));
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("stability.epsilon must be positive");
    }
}

double StabilityClass::rate(double r, double t) const {
    return is_exponential(kind) ? std::exp(-alpha * t) * r : beta(r, t);
}

ResolutionFormula resolution_formula(const StabilityClass& stability, double mu_bar,
                                     double horizon) {
    stability.validate();
    if (!(horizon > 0.0)) {
        throw ConfigError("resolution: horizon T must be positive");
    }
    ResolutionFormula f;
    if (is_exponential(stability.kind)) {
        f.rate_constant = std::max(mu_bar, -stability.alpha);
        f.exponent = f.rate_constant + stability.alpha;
    } else {
        f.rate_constant = std::max(mu_bar, 0.0);
        f.exponent = f.rate_constant;
    }
    f.delta = std::exp(-f.exponent * horizon) * stability.epsilon;
    return f;
}

double resolution(const StabilityClass& stability, double mu_bar, double horizon) {
    return resolution_formula(stability, mu_bar, horizon).delta;
}

std::string ApproxSet::guarantee() const {
    switch (stability.kind) {
        case StabilityKind::Practical:
            return "|x(t,x0,d0)-x(t,xi,di)| < beta(|x0-xi|+eps,t) + 2eps";
        case StabilityKind::PracticalExponential:
            return "|x(t,x0,d0)-x(t,xi,di)| < exp(-alpha t)(|x0-xi|+eps) + eps";
        case StabilityKind::Asymptotic:
            return "|x(t,x0,d)-x(t,xi,d)| < beta(|x0-xi|+eps,t) + eps";
        case StabilityKind::Exponential:
            return "|x(t,x0,d)-x(t,xi,d)| < exp(-alpha t)(|x0-xi|+2eps)";
    }
    return "";
}

double ApproxSet::guaranteed_bound(double r, double t) const {
    const double eps = stability.epsilon;
    switch (stability.kind) {
        case StabilityKind::Practical: return stability.beta(r + eps, t) + 2.0 * eps;
        case StabilityKind::PracticalExponential:
            return std::exp(-stability.alpha * t) * (r + eps) + eps;
        case StabilityKind::Asymptotic: return stability.beta(r + eps, t) + eps;
        case StabilityKind::Exponential: return std::exp(-stability.alpha * t) * (r + 2.0 * eps);
    }
    return 0.0;
}

ApproxSet build_approx_set(const SystemModel& model, const StabilityClass& stability,
                           double mu_bar, double horizon, double resolution_scale,
                           std::uint64_t cap) {
    if (!(resolution_scale > 0.0)) {
        throw ConfigError("build_approx_set: resolution scale must be positive");
    }
    const ResolutionFormula f = resolution_formula(stability, mu_bar, horizon);
    return ApproxSet{grid_cover(model.initial_set(), f.delta * resolution_scale, cap),
                     horizon,
                     mu_bar,
                     stability,
                     f,
                     resolution_scale};
}

VerifyReport verify_approximating(const SystemModel& model, const ApproxSet& aset,
                                  const VerifyOptions& options) {
    if (options.hold_steps < 1) {
        throw ConfigError("verify_approximating: hold_steps must be >= 1");
    }
    const double T = aset.horizon;
    const double hold = options.hold_steps * options.step;
    VerifyReport report;
    report.tolerance = options.tolerance >= 0.0 ? options.tolerance
                                                : integration_tolerance(aset.mu_bar, T);
    report.worst_margin = -std::numeric_limits<double>::infinity();
    const bool shared = shares_disturbance(aset.stability.kind);

    for (std::size_t trial = 0; trial < options.trials; ++trial) {
        Rng rng(options.seed, trial);
        const Vec x0 = rng.point_in(model.initial_set());
        const Vec xi = aset.cover.point(aset.cover.nearest(x0).index);
        const double r = inf_norm(x0 - xi);

        DisturbanceSignal d0 = DisturbanceSignal::zero(model.dist_dim());
        DisturbanceSignal di = d0;
        if (options.policy == DisturbancePolicy::UniformIid) {
            d0 = random_disturbance(rng, model.disturbance_set(), hold, T);
            di = shared ? d0 : random_disturbance(rng, model.disturbance_set(), hold, T);
        }
        const Trajectory a = integrate(model, x0, d0, T, options.step);
        const Trajectory b = integrate(model, xi, di, T, options.step);

        double margin = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto col = static_cast<Eigen::Index>(i);
            const double lhs = (a.states.col(col) - b.states.col(col)).cwiseAbs().maxCoeff();
            margin = std::max(margin, lhs - aset.guaranteed_bound(r, a.times[i]));
        }
        const bool violated = margin > report.tolerance;
        report.violations += violated ? 1 : 0;
        report.worst_margin = std::max(report.worst_margin, margin);
        report.trials.push_back({trial, x0, options.seed, margin, violated});
    }
    return report;
}

LipschitzResolution lipschitz_fallback_resolution(const SystemModel& model, double horizon,
                                                  double epsilon, int grid_density) {
    if (!(epsilon > 0.0) || !(horizon > 0.0)) {
        throw ConfigError("lipschitz_fallback_resolution: epsilon and T must be positive");
    }
    LipschitzResolution out;
    for (const Vec& x : box_grid(model.initial_set(), grid_density)) {
        for (const Vec& d : box_grid(model.disturbance_set(), grid_density)) {
            out.lipschitz = std::max(out.lipschitz, induced_norm_inf(model.jacobian(x, d)));
        }
    }
    out.delta = std::exp(-out.lipschitz * horizon) * epsilon;
    return out;
}

}  // namespace estent
