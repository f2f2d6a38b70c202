#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "estent/box.hpp"

namespace estent {

using VectorField = std::function<Vec(const Vec& x, const Vec& d)>;
using JacobianField = std::function<Mat(const Vec& x, const Vec& d)>;

/// Disturbed system dx/dt = f(x, d) with initial set K and disturbance set D.
///
/// Construction validates the structural invariants: dimensions agree,
/// 0 is in D and f(0, 0) = 0. The analytic Jacobian, when given, is
/// trusted; use check_jacobian() to compare it against finite differences.
class SystemModel {
public:
    SystemModel(std::string name, int state_dim, int dist_dim, VectorField field,
                std::optional<JacobianField> jacobian, Box initial_set,
                Box disturbance_set);

    const std::string& name() const { return name_; }
    int state_dim() const { return state_dim_; }
    int dist_dim() const { return dist_dim_; }
    const Box& initial_set() const { return initial_set_; }
    const Box& disturbance_set() const { return disturbance_set_; }
    bool has_analytic_jacobian() const { return jacobian_.has_value(); }

    /// Unchecked evaluation for hot loops; callers guarantee dimensions.
    Vec field(const Vec& x, const Vec& d) const { return field_(x, d); }
    /// Analytic Jacobian if present, central finite differences otherwise.
    Mat jacobian(const Vec& x, const Vec& d) const;
    Mat finite_difference_jacobian(const Vec& x, const Vec& d) const;

    /// Same dynamics over different K and D.
    SystemModel with_sets(Box initial_set, Box disturbance_set) const;
    /// Same dynamics, Jacobian forced to finite differences.
    SystemModel without_analytic_jacobian() const;

private:
    std::string name_;
    int state_dim_;
    int dist_dim_;
    VectorField field_;
    std::optional<JacobianField> jacobian_;
    Box initial_set_;
    Box disturbance_set_;
};

/// f(x, d) with dimension and d-in-D checks.
Vec evaluate_field(const SystemModel& model, const Vec& x, const Vec& d);
Mat jacobian_at(const SystemModel& model, const Vec& x, const Vec& d);

/// Largest relative discrepancy between the analytic Jacobian and central
/// differences over the given sample points (0 without an analytic Jacobian).
double check_jacobian(const SystemModel& model, const std::vector<Vec>& xs,
                      const std::vector<Vec>& ds);

/// Piecewise-constant disturbance: sample i is held on
/// [i * period, (i + 1) * period); the last sample is held forever.
/// An empty sample list is the zero signal.
class DisturbanceSignal {
public:
    DisturbanceSignal(int dist_dim, double period, std::vector<Vec> samples);
    static DisturbanceSignal zero(int dist_dim);
    static DisturbanceSignal constant(const Vec& value);

    /// Throws ConfigError if any sample is outside `set`.
    void check_within(const Box& set) const;

    Vec at(double t) const;
    int dist_dim() const { return dist_dim_; }
    double period() const { return period_; }
    const std::vector<Vec>& samples() const { return samples_; }

private:
    int dist_dim_;
    double period_;
    std::vector<Vec> samples_;
};

/// Uniform-grid trajectory; column i of `states` is x(times[i]).
struct Trajectory {
    std::vector<double> times;
    Mat states;
    double step = 0.0;

    std::size_t size() const { return times.size(); }
    Vec state(std::size_t i) const { return states.col(static_cast<Eigen::Index>(i)); }
    Vec final_state() const { return states.col(states.cols() - 1); }
};

/// Number of fixed steps covering `horizon`; throws unless `step` divides it.
std::size_t step_count(double horizon, double step);

/// Classical fixed-step RK4. The disturbance is read at the start of each
/// step at absolute time t_offset + t, so sample periods that are multiples
/// of `step` are reproduced exactly.
Trajectory integrate(const SystemModel& model, const Vec& x0, const DisturbanceSignal& d,
                     double horizon, double step, double t_offset = 0.0);

/// Sampled maximum of mu_inf(df/dx) over a uniform grid of K x D.
struct MuBarEstimate {
    double value = 0.0;
    std::size_t samples = 0;
    /// Always false: grid sampling is not a global bound.
    bool certified = false;
};

/// `grid_density` points per non-degenerate axis, vertices included.
MuBarEstimate estimate_mu_bar(const SystemModel& model, int grid_density);

/// Uniform grid over a box, row-major, first axis slowest.
std::vector<Vec> box_grid(const Box& box, int points_per_axis);

/// Default slack for trajectory comparisons: 1e-6 * exp(|mu_bar| * T).
double integration_tolerance(double mu_bar, double horizon);

struct DivergenceReport {
    /// max_t (|x1(t) - x2(t)| - exp(mu_bar t) |x1 - x2|)
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool passed() const { return max_violation <= tolerance; }
};

DivergenceReport divergence_bound_check(const SystemModel& model, const Vec& x1,
                                        const Vec& x2, const DisturbanceSignal& d,
                                        double horizon, double mu_bar,
                                        double step = 1e-3);

/// det of the sensitivity matrix dx(T)/dx0 from the variational equation and
/// exp(int_0^T tr f_x ds), both integrated on the same RK4 grid.
struct FlowDeterminant {
    double det_variational = 0.0;
    double exp_trace_integral = 0.0;
    double relative_gap() const;
};

FlowDeterminant flow_determinant_pair(const SystemModel& model, const Vec& x0,
                                      const DisturbanceSignal& d, double horizon,
                                      double step = 1e-3);

}  // namespace estent
