#include "estent/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "estent/errors.hpp"

namespace estent {

std::uint64_t axis_cell_count(double width, double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ConfigError("cover radius must be positive and finite, got " +
                          std::to_string(delta));
    }
    if (width == 0.0) {
        return 1;
    }
    const double ratio = width / (2.0 * delta);
    if (!(ratio < 0x1.0p62)) {
        throw CapacityError("cover resolution infeasible: " + std::to_string(ratio) +
                            " cells on one axis");
    }
    auto count = static_cast<std::uint64_t>(std::max(1.0, std::ceil(ratio)));
    if (count > 1 && static_cast<double>(count - 1) * (2.0 * delta) >= width) {
        --count;
    }
    return count;
}

Cover::Cover(Box box, double delta, std::uint64_t cap) : box_(std::move(box)), delta_(delta) {
    counts_.reserve(static_cast<std::size_t>(box_.dim()));
    for (Eigen::Index i = 0; i < box_.dim(); ++i) {
        const std::uint64_t c = axis_cell_count(2.0 * box_.half_widths()[i], delta_);
        if (c > cap / size_) {
            throw CapacityError("cover cardinality exceeds cap of " + std::to_string(cap) +
                                " points (delta=" + std::to_string(delta_) + ")");
        }
        size_ *= c;
        counts_.push_back(c);
    }
}

double Cover::axis_point(Eigen::Index axis, std::uint64_t j) const {
    const double w = box_.half_widths()[axis];
    const double c = box_.center()[axis];
    const auto count = counts_[static_cast<std::size_t>(axis)];
    if (count == 1) {
        return c;
    }
    const double cell = 2.0 * w / static_cast<double>(count);
    return (c - w) + (static_cast<double>(j) + 0.5) * cell;
}

std::vector<std::uint64_t> Cover::unflatten(std::uint64_t index) const {
    if (index >= size_) {
        throw ConfigError("cover index " + std::to_string(index) + " out of range " +
                          std::to_string(size_));
    }
    std::vector<std::uint64_t> cell(counts_.size());
    for (std::size_t i = counts_.size(); i-- > 0;) {
        cell[i] = index % counts_[i];
        index /= counts_[i];
    }
    return cell;
}

std::uint64_t Cover::flatten(const std::vector<std::uint64_t>& cell) const {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        index = index * counts_[i] + cell[i];
    }
    return index;
}

Vec Cover::point(std::uint64_t index) const {
    const auto cell = unflatten(index);
    Vec p(box_.dim());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p[i] = axis_point(i, cell[static_cast<std::size_t>(i)]);
    }
    return p;
}

NearestPoint Cover::nearest(const Vec& x) const {
    if (x.size() != box_.dim()) {
        throw ConfigError("nearest_index: dimension mismatch");
    }
    std::vector<std::uint64_t> cell(counts_.size(), 0);
    double distance = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const auto count = counts_[static_cast<std::size_t>(i)];
        std::uint64_t best = 0;
        if (count > 1) {
            const double w = box_.half_widths()[i];
            const double cell_width = 2.0 * w / static_cast<double>(count);
            const double u = (x[i] - (box_.center()[i] - w)) / cell_width - 0.5;
            const double last = static_cast<double>(count - 1);
            const auto lo = static_cast<std::uint64_t>(std::clamp(std::floor(u), 0.0, last));
            const std::uint64_t hi = std::min(lo + 1, count - 1);
            best = std::abs(x[i] - axis_point(i, hi)) < std::abs(x[i] - axis_point(i, lo))
                       ? hi
                       : lo;
        }
        cell[static_cast<std::size_t>(i)] = best;
        distance = std::max(distance, std::abs(x[i] - axis_point(i, best)));
    }
    return {flatten(cell), distance};
}

Cover grid_cover(const Box& box, double delta, std::uint64_t cap) {
    return Cover(box, delta, cap);
}

NearestPoint nearest_index(const Cover& cover, const Vec& x) { return cover.nearest(x); }

std::uint64_t covering_number(const Box& box, double delta, std::uint64_t cap) {
    return Cover(box, delta, cap).size();
}

}  // namespace estent
