#pragma once

#include <Eigen/Dense>

namespace estent {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Infinity norm |x| = max_i |x_i|; zero for empty vectors.
double inf_norm(const Vec& x);

/// Axis-aligned hyperrectangle stored as center and half-widths.
///
/// Under the infinity norm the closed ball B(c, r) is the box with all
/// half-widths equal to r, so balls and boxes share this type.
class Box {
public:
    Box() = default;
    Box(Vec center, Vec half_widths);

    static Box from_bounds(const Vec& lo, const Vec& hi);
    static Box ball(const Vec& center, double radius);
    /// Smallest hypercube with the same center containing this box.
    Box hypercube_hull() const;

    const Vec& center() const { return center_; }
    const Vec& half_widths() const { return half_widths_; }
    Eigen::Index dim() const { return center_.size(); }
    Vec lower() const { return center_ - half_widths_; }
    Vec upper() const { return center_ + half_widths_; }
    double max_half_width() const;

    bool contains(const Vec& x, double tol = 0.0) const;
    /// Componentwise projection onto the box.
    Vec clamp(const Vec& x) const;
    /// Product of the full widths.
    double volume() const;

    bool operator==(const Box& other) const;

private:
    Vec center_;
    Vec half_widths_;
};

}  // namespace estent
