#pragma once

#include <cstdint>
#include <vector>

#include "estent/box.hpp"

namespace estent {

inline constexpr std::uint64_t kDefaultCoverCap = std::uint64_t{1} << 40;

struct NearestPoint {
    std::uint64_t index = 0;
    double distance = 0.0;
};

/// Uniform midpoint grid that is a delta-cover of a box under the infinity norm.
///
/// Axis i is split into counts[i] = ceil(width_i / (2 delta)) equal cells
/// (at least one) and the cover points are the cell midpoints. Points are
/// never materialised; index <-> point is row-major with axis 0 slowest.
class Cover {
public:
    Cover(Box box, double delta, std::uint64_t cap = kDefaultCoverCap);

    const Box& box() const { return box_; }
    double delta() const { return delta_; }
    const std::vector<std::uint64_t>& per_axis_counts() const { return counts_; }
    std::uint64_t size() const { return size_; }

    Vec point(std::uint64_t index) const;
    /// Nearest point in infinity distance; per-axis ties go to the smaller
    /// cell index. x may lie outside the box.
    NearestPoint nearest(const Vec& x) const;

    std::vector<std::uint64_t> unflatten(std::uint64_t index) const;
    std::uint64_t flatten(const std::vector<std::uint64_t>& cell) const;

private:
    double axis_point(Eigen::Index axis, std::uint64_t j) const;

    Box box_;
    double delta_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t size_ = 1;
};

Cover grid_cover(const Box& box, double delta, std::uint64_t cap = kDefaultCoverCap);
NearestPoint nearest_index(const Cover& cover, const Vec& x);

/// Cardinality of the grid cover: an upper bound on the minimal number of
/// delta-balls covering the box.
std::uint64_t covering_number(const Box& box, double delta,
                              std::uint64_t cap = kDefaultCoverCap);

/// ceil(width / (2 delta)), minimum 1, corrected downward when floating
/// rounding pushed an exact quotient past an integer.
std::uint64_t axis_cell_count(double width, double delta);

}  // namespace estent
