#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "estent/cover.hpp"
#include "estent/dynamics.hpp"

namespace estent {

/// The four incremental-stability notions, each with its finite
/// approximating-set construction.
enum class StabilityKind {
    Practical,             // (beta, K, eps)-practical
    PracticalExponential,  // (alpha, K, eps)-practical exponential
    Asymptotic,            // (beta, K)-asymptotic
    Exponential,           // (alpha, K)-exponential
};

std::string to_string(StabilityKind kind);
/// Accepts "practical", "practical-exponential", "asymptotic", "exponential".
StabilityKind parse_stability_kind(const std::string& text);
bool is_exponential(StabilityKind kind);
/// Asymptotic kinds compare trajectories under one shared disturbance.
bool shares_disturbance(StabilityKind kind);

/// beta(r, t) = C * exp(-lambda t) * r with C >= 1, lambda > 0.
class RateFunction {
public:
    explicit RateFunction(double lambda = 1.0, double gain = 1.0);

    double operator()(double r, double t) const { return gain_ * std::exp(-lambda_ * t) * r; }
    double lambda() const { return lambda_; }
    double gain() const { return gain_; }

    bool operator==(const RateFunction&) const = default;

private:
    double lambda_;
    double gain_;
};

struct StabilityClass {
    StabilityKind kind = StabilityKind::Practical;
    RateFunction beta;
    double alpha = 0.0;
    double epsilon = 0.0;

    /// Throws ConfigError: alpha > 0 for exponential kinds, epsilon > 0.
    void validate() const;
    /// The comparison function the kind uses: beta, or exp(-alpha t) r.
    double rate(double r, double t) const;
};

/// Which closed-form resolution was applied.
struct ResolutionFormula {
    double rate_constant = 0; // c_bar = max(mu_bar, 0), or M = max(mu_bar, -alpha)
    double exponent = 0;      // c_bar, or M + alpha
    double delta = 0;         // exp(-exponent * T) * epsilon
};

ResolutionFormula resolution_formula(const StabilityClass& stability, double mu_bar,
                                     double horizon);
double resolution(const StabilityClass& stability, double mu_bar, double horizon);

struct ApproxSet {
    Cover cover;
    double horizon;
    double mu_bar;
    StabilityClass stability;
    ResolutionFormula formula;
    /// Multiplier applied to the closed-form resolution (1 unless deliberately coarsened).
    double resolution_scale = 1.0;

    /// Human-readable form of the guaranteed inequality.
    std::string guarantee() const;
    /// Right-hand side of the guaranteed inequality for |x0 - xi| = r at time t.
    double guaranteed_bound(double r, double t) const;
};

ApproxSet build_approx_set(const SystemModel& model, const StabilityClass& stability,
                           double mu_bar, double horizon, double resolution_scale = 1.0,
                           std::uint64_t cap = kDefaultCoverCap);

enum class DisturbancePolicy { Zero, UniformIid };

struct VerifyOptions {
    std::size_t trials = 500;
    std::uint64_t seed = 0;
    DisturbancePolicy policy = DisturbancePolicy::UniformIid;
    /// Disturbance sample period in integrator steps.
    int hold_steps = 10;
    double step = 1e-3;
    /// Negative means integration_tolerance(mu_bar, T).
    double tolerance = -1.0;
};

struct TrialResult {
    std::size_t trial = 0;
    Vec x0;
    std::uint64_t seed = 0;
    /// max_t (lhs - rhs); negative when the inequality holds with room.
    double worst_margin = 0.0;
    bool violated = false;
};

struct VerifyReport {
    std::size_t violations = 0;
    double worst_margin = 0.0;
    double tolerance = 0.0;
    std::vector<TrialResult> trials;
};

/// Samples x0 in K and disturbances, picks the nearest cover point and checks
/// the guaranteed inequality at every grid time on [0, T].
VerifyReport verify_approximating(const SystemModel& model, const ApproxSet& aset,
                                  const VerifyOptions& options);

/// exp(-L T) eps with L the sampled max of the induced Jacobian norm over K x D.
struct LipschitzResolution {
    double lipschitz = 0.0;
    double delta = 0.0;
};

LipschitzResolution lipschitz_fallback_resolution(const SystemModel& model, double horizon,
                                                  double epsilon, int grid_density);

}  // namespace estent
