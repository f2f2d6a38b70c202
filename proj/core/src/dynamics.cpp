#include "estent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "estent/errors.hpp"
#include "estent/matrix_measure.hpp"

namespace estent {

namespace {

constexpr double kZeroFieldTol = 1e-9;
constexpr double kSetTol = 1e-12;

void require_dim(const Vec& v, int expected, const char* what) {
    if (v.size() != expected) {
        throw ConfigError(std::string(what) + ": expected dimension " +
                          std::to_string(expected) + ", got " + std::to_string(v.size()));
    }
}

void require_finite(const Vec& y, double t) {
    if (!y.allFinite()) {
        throw IntegrationError("non-finite state at t=" + std::to_string(t) +
                               "; the model is not forward complete at this step size");
    }
}

// One classical RK4 step of dy/dt = rhs(y) with the disturbance frozen.
template <typename Rhs>
void rk4_step(const Rhs& rhs, Vec& y, double h) {
    const Vec k1 = rhs(y);
    const Vec k2 = rhs(y + 0.5 * h * k1);
    const Vec k3 = rhs(y + 0.5 * h * k2);
    const Vec k4 = rhs(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

SystemModel::SystemModel(std::string name, int state_dim, int dist_dim, VectorField field,
                         std::optional<JacobianField> jacobian, Box initial_set,
                         Box disturbance_set)
    : name_(std::move(name)),
      state_dim_(state_dim),
      dist_dim_(dist_dim),
      field_(std::move(field)),
      jacobian_(std::move(jacobian)),
      initial_set_(std::move(initial_set)),
      disturbance_set_(std::move(disturbance_set)) {
    if (state_dim_ <= 0 || dist_dim_ < 0) {
        throw ConfigError("SystemModel '" + name_ + "': bad dimensions");
    }
    if (!field_) {
        throw ConfigError("SystemModel '" + name_ + "': missing vector field");
    }
    if (initial_set_.dim() != state_dim_) {
        throw ConfigError("SystemModel '" + name_ + "': K has dimension " +
                          std::to_string(initial_set_.dim()) + ", expected " +
                          std::to_string(state_dim_));
    }
    if (disturbance_set_.dim() != dist_dim_) {
        throw ConfigError("SystemModel '" + name_ + "': D has dimension " +
                          std::to_string(disturbance_set_.dim()) + ", expected " +
                          std::to_string(dist_dim_));
    }
    if (!disturbance_set_.contains(Vec::Zero(dist_dim_))) {
        throw ConfigError("SystemModel '" + name_ + "': D must contain the origin");
    }
    const Vec f00 = field_(Vec::Zero(state_dim_), Vec::Zero(dist_dim_));
    if (f00.size() != state_dim_ || inf_norm(f00) > kZeroFieldTol) {
        throw ConfigError("SystemModel '" + name_ + "': f(0, 0) must vanish");
    }
}

Mat SystemModel::jacobian(const Vec& x, const Vec& d) const {
    return jacobian_ ? (*jacobian_)(x, d) : finite_difference_jacobian(x, d);
}

Mat SystemModel::finite_difference_jacobian(const Vec& x, const Vec& d) const {
    Mat j(state_dim_, state_dim_);
    Vec probe = x;
    for (int i = 0; i < state_dim_; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        probe[i] = x[i] + h;
        const Vec plus = field_(probe, d);
        probe[i] = x[i] - h;
        const Vec minus = field_(probe, d);
        probe[i] = x[i];
        j.col(i) = (plus - minus) / (2.0 * h);
    }
    return j;
}

SystemModel SystemModel::with_sets(Box initial_set, Box disturbance_set) const {
    return SystemModel(name_, state_dim_, dist_dim_, field_, jacobian_,
                       std::move(initial_set), std::move(disturbance_set));
}

SystemModel SystemModel::without_analytic_jacobian() const {
    return SystemModel(name_, state_dim_, dist_dim_, field_, std::nullopt, initial_set_,
                       disturbance_set_);
}

Vec evaluate_field(const SystemModel& model, const Vec& x, const Vec& d) {
    require_dim(x, model.state_dim(), "evaluate_field x");
    require_dim(d, model.dist_dim(), "evaluate_field d");
    if (!model.disturbance_set().contains(d, kSetTol)) {
        throw ConfigError("evaluate_field: disturbance outside D");
    }
    return model.field(x, d);
}

Mat jacobian_at(const SystemModel& model, const Vec& x, const Vec& d) {
    require_dim(x, model.state_dim(), "jacobian_at x");
    require_dim(d, model.dist_dim(), "jacobian_at d");
    return model.jacobian(x, d);
}

double check_jacobian(const SystemModel& model, const std::vector<Vec>& xs,
                      const std::vector<Vec>& ds) {
    if (!model.has_analytic_jacobian()) {
        return 0.0;
    }
    double worst = 0.0;
    for (const Vec& x : xs) {
        for (const Vec& d : ds) {
            const Mat analytic = model.jacobian(x, d);
            const Mat numeric = model.finite_difference_jacobian(x, d);
            const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
            worst = std::max(worst, (analytic - numeric).cwiseAbs().maxCoeff() / scale);
        }
    }
    return worst;
}

DisturbanceSignal::DisturbanceSignal(int dist_dim, double period, std::vector<Vec> samples)
    : dist_dim_(dist_dim), period_(period), samples_(std::move(samples)) {
    if (dist_dim_ < 0) {
        throw ConfigError("DisturbanceSignal: negative dimension");
    }
    if (!samples_.empty() && !(period_ > 0.0)) {
        throw ConfigError("DisturbanceSignal: sample period must be positive");
    }
    for (const Vec& s : samples_) {
        require_dim(s, dist_dim_, "DisturbanceSignal sample");
    }
}

DisturbanceSignal DisturbanceSignal::zero(int dist_dim) { return {dist_dim, 1.0, {}}; }

DisturbanceSignal DisturbanceSignal::constant(const Vec& value) {
    return {static_cast<int>(value.size()), 1.0, {value}};
}

void DisturbanceSignal::check_within(const Box& set) const {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!set.contains(samples_[i], kSetTol)) {
            throw ConfigError("DisturbanceSignal: sample " + std::to_string(i) +
                              " lies outside D");
        }
    }
}

Vec DisturbanceSignal::at(double t) const {
    if (samples_.empty()) {
        return Vec::Zero(dist_dim_);
    }
    const double slot = std::floor(t / period_ + 1e-9);
    if (!(slot > 0.0)) {
        return samples_.front();
    }
    const auto idx = static_cast<std::size_t>(
        std::min(slot, static_cast<double>(samples_.size() - 1)));
    return samples_[idx];
}

std::size_t step_count(double horizon, double step) {
    if (!(horizon > 0.0) || !(step > 0.0)) {
        throw ConfigError("integration horizon and step must be positive");
    }
    const double ratio = horizon / step;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * step - horizon) > 1e-9 * std::max(1.0, horizon)) {
        throw ConfigError("step " + std::to_string(step) + " does not divide horizon " +
                          std::to_string(horizon));
    }
    return static_cast<std::size_t>(n);
}

Trajectory integrate(const SystemModel& model, const Vec& x0, const DisturbanceSignal& d,
                     double horizon, double step, double t_offset) {
    require_dim(x0, model.state_dim(), "integrate x0");
    if (d.dist_dim() != model.dist_dim()) {
        throw ConfigError("integrate: disturbance dimension mismatch");
    }
    const std::size_t steps = step_count(horizon, step);
    Trajectory traj;
    traj.step = step;
    traj.times.resize(steps + 1);
    traj.states.resize(model.state_dim(), static_cast<Eigen::Index>(steps + 1));

    Vec x = x0;
    require_finite(x, 0.0);
    traj.times[0] = 0.0;
    traj.states.col(0) = x;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * step;
        const Vec di = d.at(t_offset + t);
        rk4_step([&](const Vec& y) { return model.field(y, di); }, x, step);
        const double t_next = static_cast<double>(i + 1) * step;
        require_finite(x, t_next);
        traj.times[i + 1] = t_next;
        traj.states.col(static_cast<Eigen::Index>(i + 1)) = x;
    }
    return traj;
}

std::vector<Vec> box_grid(const Box& box, int points_per_axis) {
    if (points_per_axis < 1) {
        throw ConfigError("box_grid: need at least one point per axis");
    }
    const Eigen::Index n = box.dim();
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& axis = axes[static_cast<std::size_t>(i)];
        const double c = box.center()[i];
        const double w = box.half_widths()[i];
        if (w == 0.0 || points_per_axis == 1) {
            axis.push_back(c);
            continue;
        }
        for (int j = 0; j < points_per_axis; ++j) {
            const double s = -1.0 + 2.0 * j / (points_per_axis - 1);
            axis.push_back(c + s * w);
        }
    }
    std::vector<Vec> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        Vec p(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            p[i] = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
        }
        out.push_back(std::move(p));
        Eigen::Index axis = n - 1;
        while (axis >= 0) {
            auto& j = idx[static_cast<std::size_t>(axis)];
            if (++j < axes[static_cast<std::size_t>(axis)].size()) {
                break;
            }
            j = 0;
            --axis;
        }
        if (axis < 0) {
            break;
        }
    }
    return out;
}

MuBarEstimate estimate_mu_bar(const SystemModel& model, int grid_density) {
    MuBarEstimate est;
    est.value = -std::numeric_limits<double>::infinity();
    const auto xs = box_grid(model.initial_set(), grid_density);
    const auto ds = box_grid(model.disturbance_set(), grid_density);
    for (const Vec& x : xs) {
        for (const Vec& d : ds) {
            est.value = std::max(est.value, matrix_measure_inf(model.jacobian(x, d)));
            ++est.samples;
        }
    }
    return est;
}

double integration_tolerance(double mu_bar, double horizon) {
    return 1e-6 * std::exp(std::abs(mu_bar) * horizon);
}

DivergenceReport divergence_bound_check(const SystemModel& model, const Vec& x1,
                                        const Vec& x2, const DisturbanceSignal& d,
                                        double horizon, double mu_bar, double step) {
    const Trajectory a = integrate(model, x1, d, horizon, step);
    const Trajectory b = integrate(model, x2, d, horizon, step);
    const double gap0 = inf_norm(x1 - x2);
    DivergenceReport report;
    report.tolerance = integration_tolerance(mu_bar, horizon);
    report.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const double gap = (a.states.col(col) - b.states.col(col)).cwiseAbs().maxCoeff();
        report.max_violation =
            std::max(report.max_violation, gap - std::exp(mu_bar * a.times[i]) * gap0);
    }
    return report;
}

double FlowDeterminant::relative_gap() const {
    return std::abs(det_variational - exp_trace_integral) / std::abs(exp_trace_integral);
}

FlowDeterminant flow_determinant_pair(const SystemModel& model, const Vec& x0,
                                      const DisturbanceSignal& d, double horizon,
                                      double step) {
    require_dim(x0, model.state_dim(), "flow_determinant_pair x0");
    const int n = model.state_dim();
    const std::size_t steps = step_count(horizon, step);

    // y = [x, vec(Phi) column-major, integral of tr f_x]
    Vec y = Vec::Zero(n + n * n + 1);
    y.head(n) = x0;
    Eigen::Map<Mat>(y.data() + n, n, n).setIdentity();

    for (std::size_t i = 0; i < steps; ++i) {
        const Vec di = d.at(static_cast<double>(i) * step);
        auto rhs = [&](const Vec& s) {
            Vec out(s.size());
            const Vec x = s.head(n);
            const Mat j = model.jacobian(x, di);
            out.head(n) = model.field(x, di);
            Eigen::Map<Mat>(out.data() + n, n, n) =
                j * Eigen::Map<const Mat>(s.data() + n, n, n);
            out[n + n * n] = j.trace();
            return out;
        };
        rk4_step(rhs, y, step);
        require_finite(y, static_cast<double>(i + 1) * step);
    }
    FlowDeterminant out;
    out.det_variational = Eigen::Map<const Mat>(y.data() + n, n, n).determinant();
    out.exp_trace_integral = std::exp(y[n + n * n]);
    return out;
}

}  // namespace estent
