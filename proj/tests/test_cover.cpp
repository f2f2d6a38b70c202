#include <gtest/gtest.h>

#include <random>

#include "estent/cover.hpp"
#include "estent/errors.hpp"
#include "test_models.hpp"

using namespace estent;
using namespace estent::testing;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

Vec random_point(std::mt19937_64& rng, const Box& box) {
    Vec x(box.dim());
    for (Eigen::Index i = 0; i < box.dim(); ++i) {
        std::uniform_real_distribution<double> u(box.lower()(i), box.upper()(i));
        x(i) = u(rng);
    }
    return x;
}

}  // namespace

TEST(Cover, SinglePointForHalfUnit) {
    const Cover c = grid_cover(cube(2, 0, 1), 0.5);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_TRUE(c.point(0).isApprox(v2(0.5, 0.5)));
}

TEST(Cover, FourPointsForQuarter) {
    const Cover c = grid_cover(cube(2, 0, 1), 0.25);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(c.per_axis_counts(), (std::vector<std::uint64_t>{2, 2}));
    EXPECT_TRUE(c.point(0).isApprox(v2(0.25, 0.25)));
    EXPECT_TRUE(c.point(1).isApprox(v2(0.25, 0.75)));
    EXPECT_TRUE(c.point(2).isApprox(v2(0.75, 0.25)));
    EXPECT_TRUE(c.point(3).isApprox(v2(0.75, 0.75)));
}

TEST(Cover, DegenerateAxis) {
    const Box b(v2(0.3, 2.0), v2(1.0, 0.0));
    const Cover c = grid_cover(b, 0.25);
    EXPECT_EQ(c.per_axis_counts(), (std::vector<std::uint64_t>{4, 1}));
    for (std::uint64_t i = 0; i < c.size(); ++i) {
        EXPECT_DOUBLE_EQ(c.point(i)(1), 2.0);
    }
}

TEST(Cover, RejectsBadArguments) {
    EXPECT_THROW(grid_cover(cube(2, 0, 1), 0.0), ConfigError);
    EXPECT_THROW(grid_cover(cube(2, 0, 1), -1.0), ConfigError);
    EXPECT_THROW(grid_cover(cube(3, 0, 1), 1e-4, 1000), CapacityError);
    const Cover c = grid_cover(cube(2, 0, 1), 0.25);
    EXPECT_THROW(c.point(4), ConfigError);
    EXPECT_THROW(c.nearest(Vec::Zero(3)), ConfigError);
}

TEST(Cover, AxisCountCorrectsRounding) {
    EXPECT_EQ(axis_cell_count(1.0, 0.5), 1u);
    EXPECT_EQ(axis_cell_count(1.0, 0.05), 10u);
    EXPECT_EQ(axis_cell_count(0.3, 0.05), 3u);
    // 0.14 / 0.02 rounds to 7.000000000000001.
    EXPECT_EQ(axis_cell_count(0.14, 0.01), 7u);
    EXPECT_EQ(axis_cell_count(0.0, 0.01), 1u);
    EXPECT_EQ(axis_cell_count(1.0, 10.0), 1u);
}

TEST(Nearest, ExactPointAndTie) {
    const Cover c = grid_cover(cube(2, 0, 1), 0.25);
    const auto hit = nearest_index(c, c.point(2));
    EXPECT_EQ(hit.index, 2u);
    EXPECT_DOUBLE_EQ(hit.distance, 0.0);

    const Cover line = grid_cover(interval(0, 1), 0.25);
    const auto tie = nearest_index(line, Vec::Constant(1, 0.5));
    EXPECT_EQ(tie.index, 0u);
    EXPECT_DOUBLE_EQ(tie.distance, 0.25);
}

TEST(Nearest, MatchesBruteForce) {
    std::mt19937_64 rng(5);
    Vec c(3), h(3);
    c << 0.1, -0.4, 2.0;
    h << 0.7, 0.3, 1.1;
    const Box box(c, h);
    const Cover cover = grid_cover(box, 0.13);
    ASSERT_LT(cover.size(), 5000u);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec x = random_point(rng, box);
        double best = std::numeric_limits<double>::infinity();
        std::uint64_t best_index = 0;
        for (std::uint64_t i = 0; i < cover.size(); ++i) {
            const double dist = inf_norm(cover.point(i) - x);
            if (dist < best) {
                best = dist;
                best_index = i;
            }
        }
        const auto got = nearest_index(cover, x);
        EXPECT_DOUBLE_EQ(got.distance, best) << "trial " << trial << " brute index " << best_index;
        EXPECT_NEAR(inf_norm(cover.point(got.index) - x), got.distance, 1e-15);
    }
}

TEST(Nearest, OutsidePointsStillGetClosestPoint) {
    const Cover c = grid_cover(interval(0, 1), 0.25);
    const auto r = nearest_index(c, Vec::Constant(1, 3.0));
    EXPECT_EQ(r.index, 1u);
    EXPECT_DOUBLE_EQ(r.distance, 2.25);
}

TEST(Cover, CoversRandomPoints) {
    std::mt19937_64 rng(9);
    for (double delta : {0.5, 0.13, 0.031}) {
        const Box box = cube(2, -1.0, 0.7);
        const Cover cover = grid_cover(box, delta);
        for (int i = 0; i < 10000; ++i) {
            const Vec x = random_point(rng, box);
            ASSERT_LE(nearest_index(cover, x).distance, delta * (1 + 1e-12));
        }
    }
}

TEST(Cover, IndexRoundTripAndPurity) {
    const Cover a = grid_cover(cube(3, -1, 1), 0.3);
    const Cover b = grid_cover(cube(3, -1, 1), 0.3);
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.flatten(a.unflatten(i)), i);
        EXPECT_EQ(a.point(i), b.point(i));
    }
}

TEST(CoveringNumber, KnownValues) {
    EXPECT_EQ(covering_number(cube(3, 0, 1), 0.5), 1u);
    EXPECT_EQ(covering_number(cube(3, 0, 1), 0.05), 1000u);
    Vec c(2), h(2);
    c << 3.0, -1.0;
    h << 0.4, 2.5;
    EXPECT_EQ(covering_number(Box(c, h), 2.5), 1u);
    EXPECT_EQ(covering_number(Box(c, h), 10.0), 1u);
}

TEST(CoveringNumber, MonotoneInDelta) {
    const Box box = cube(2, -1, 1);
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    for (double delta = 0.01; delta < 2.0; delta *= 1.07) {
        const auto n = covering_number(box, delta);
        EXPECT_LE(n, prev);
        prev = n;
    }
}

TEST(CoveringNumber, PowerOfDimension) {
    for (double delta : {0.3, 0.07, 0.011}) {
        const auto one = covering_number(cube(1, 0, 1), delta);
        std::uint64_t expected = 1;
        for (int n = 1; n <= 4; ++n) {
            expected *= one;
            EXPECT_EQ(covering_number(cube(n, 0, 1), delta), expected);
        }
    }
}
