#include "estent/box.hpp"

#include <algorithm>
#include <cmath>

#include "estent/errors.hpp"

namespace estent {

double inf_norm(const Vec& x) {
    return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
}

Box::Box(Vec center, Vec half_widths)
    : center_(std::move(center)), half_widths_(std::move(half_widths)) {
    if (center_.size() != half_widths_.size()) {
        throw ConfigError("Box: center and half-widths differ in length");
    }
    for (Eigen::Index i = 0; i < half_widths_.size(); ++i) {
        if (!(half_widths_[i] >= 0.0) || !std::isfinite(half_widths_[i]) ||
            !std::isfinite(center_[i])) {
            throw ConfigError("Box: half-widths must be finite and non-negative");
        }
    }
}

Box Box::from_bounds(const Vec& lo, const Vec& hi) {
    if (lo.size() != hi.size()) {
        throw ConfigError("Box: lower and upper bounds differ in length");
    }
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        if (lo[i] > hi[i]) {
            throw ConfigError("Box: lower bound exceeds upper bound on axis " +
                              std::to_string(i));
        }
    }
    return Box(0.5 * (lo + hi), 0.5 * (hi - lo));
}

Box Box::ball(const Vec& center, double radius) {
    if (!(radius >= 0.0)) {
        throw ConfigError("Box::ball: radius must be non-negative");
    }
    return Box(center, Vec::Constant(center.size(), radius));
}

Box Box::hypercube_hull() const { return ball(center_, max_half_width()); }

double Box::max_half_width() const {
    return half_widths_.size() == 0 ? 0.0 : half_widths_.maxCoeff();
}

bool Box::contains(const Vec& x, double tol) const {
    if (x.size() != center_.size()) {
        return false;
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x[i] - center_[i]) > half_widths_[i] + tol) {
            return false;
        }
    }
    return true;
}

Vec Box::clamp(const Vec& x) const {
    return x.cwiseMax(lower()).cwiseMin(upper());
}

double Box::volume() const { return (2.0 * half_widths_).prod(); }

bool Box::operator==(const Box& other) const {
    return center_.size() == other.center_.size() && center_ == other.center_ &&
           half_widths_ == other.half_widths_;
}

}  // namespace estent
