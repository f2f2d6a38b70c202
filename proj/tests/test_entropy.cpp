#include <gtest/gtest.h>

#include <cmath>

#include "estent/cover.hpp"
#include "estent/entropy.hpp"
#include "estent/errors.hpp"
#include "estent/systems.hpp"
#include "test_models.hpp"

using namespace estent;
using namespace estent::testing;

namespace {

StabilityClass practical(double eps) { return {StabilityKind::Practical, RateFunction(), 0.0, eps}; }

TraceSampling light_sampling() {
    TraceSampling s;
    s.random_streams = 1;
    s.step = 1e-2;
    return s;
}

}  // namespace

TEST(EntropyCase, MapsFromStabilityKind) {
    EXPECT_EQ(entropy_case_for(StabilityKind::Practical), EntropyCase::I);
    EXPECT_EQ(entropy_case_for(StabilityKind::PracticalExponential), EntropyCase::II);
    EXPECT_EQ(entropy_case_for(StabilityKind::Asymptotic), EntropyCase::III);
    EXPECT_EQ(entropy_case_for(StabilityKind::Exponential), EntropyCase::IV);
    EXPECT_EQ(to_string(EntropyCase::IV), "iv");
}

TEST(UpperBound, Examples) {
    EXPECT_DOUBLE_EQ(upper_bound(EntropyCase::I, -1.0, std::nullopt, 3), 0.0);
    EXPECT_DOUBLE_EQ(upper_bound(EntropyCase::II, 2.0, 1.0, 3), 9.0);
    EXPECT_DOUBLE_EQ(upper_bound(EntropyCase::IV, -2.0, 1.0, 2), 0.0);
    EXPECT_DOUBLE_EQ(upper_bound(EntropyCase::III, 0.5, std::nullopt, 2), 1.0);
    EXPECT_THROW(upper_bound(EntropyCase::II, 0.0, std::nullopt, 1), ConfigError);
}

TEST(TraceInfimum, LinearIsTraceOfA) {
    Mat a(2, 2);
    a << -2, 1, 0.5, -3;
    const auto t = trace_infimum(linear_model(a), 1.0, light_sampling());
    EXPECT_DOUBLE_EQ(t.value, -5.0);
    EXPECT_TRUE(t.finite);
    EXPECT_GT(t.samples, 0u);
}

TEST(TraceInfimum, CubicAttainsBoundary) {
    const auto m = scalar_model([](double x) { return -x * x * x; }, interval(-1, 1), origin_only(1));
    EXPECT_NEAR(trace_infimum(m, 1.0, light_sampling()).value, -3.0, 1e-6);
}

TEST(TraceInfimum, ScalarDecayIsConstant) {
    const auto m = make_benchmark("scalar-contracting").model;
    EXPECT_NEAR(trace_infimum(m, 1.0, light_sampling()).value, -1.0, 1e-12);
}

TEST(LowerBound, Examples) {
    TraceInfimum t;
    t.value = -1.0;
    EXPECT_DOUBLE_EQ(lower_bound(EntropyCase::I, t, -1.0, std::nullopt, 1), -1.0);
    t.value = -4.0;
    EXPECT_DOUBLE_EQ(lower_bound(EntropyCase::II, t, -2.0, 1.0, 2), -4.0);
    t.finite = false;
    EXPECT_EQ(lower_bound(EntropyCase::I, t, 0.0, std::nullopt, 1),
              -std::numeric_limits<double>::infinity());
}

TEST(LowerBound, TightForZeroSystem) {
    const auto z = zero_model(2);
    const auto t = trace_infimum(z, 1.0, light_sampling());
    EXPECT_DOUBLE_EQ(lower_bound(EntropyCase::I, t, 0.0, std::nullopt, 2), 0.0);
    EXPECT_DOUBLE_EQ(upper_bound(EntropyCase::I, 0.0, std::nullopt, 2), 0.0);
}

TEST(EntropyCurve, MatchesClosedFormCount) {
    const auto curve = empirical_entropy_curve(interval(0, 1), practical(0.05), 1.0, {10.0});
    ASSERT_EQ(curve.points.size(), 1u);
    const double expected_count = std::ceil(10.0 * std::exp(10.0));
    EXPECT_EQ(static_cast<double>(curve.points[0].cardinality), expected_count);
    EXPECT_NEAR(curve.points[0].rate, std::log(expected_count) / 10.0, 1e-12);
    EXPECT_NEAR(curve.points[0].rate, 1.23, 0.005);
    EXPECT_EQ(curve.points[0].cardinality, covering_number(interval(0, 1), curve.points[0].delta));
}

TEST(EntropyCurve, FlatWhenNotExpanding) {
    const std::vector<double> horizons{1, 2, 5, 10, 20};
    const auto curve = empirical_entropy_curve(cube(2, 0, 1), practical(0.01), -0.5, horizons);
    ASSERT_EQ(curve.points.size(), horizons.size());
    EXPECT_DOUBLE_EQ(curve.analytic_limit, 0.0);
    for (const auto& p : curve.points) {
        EXPECT_NEAR(p.rate, 2.0 * std::log(50.0) / p.horizon, 1e-12);
    }
}

TEST(EntropyCurve, ConvergesWithinGap) {
    const std::vector<double> horizons{1, 2, 5, 10, 20};
    for (int n : {1, 2, 3}) {
        for (double mu : {0.3, 1.0}) {
            for (double eps : {0.1, 0.01}) {
                const auto curve =
                    empirical_entropy_curve(cube(n, 0, 1), practical(eps), mu, horizons);
                EXPECT_DOUBLE_EQ(curve.analytic_limit, mu * n);
                for (const auto& p : curve.points) {
                    EXPECT_LE(std::abs(p.rate - curve.analytic_limit),
                              curve_gap_bound(n, eps, p.horizon) + 1e-12)
                        << "n=" << n << " mu=" << mu << " eps=" << eps << " T=" << p.horizon;
                }
            }
        }
    }
}

TEST(EntropyCurve, TruncatesAtCap) {
    const auto curve = empirical_entropy_curve(cube(3, 0, 1), practical(0.1), 1.0, {1, 5, 20}, std::uint64_t{1} << 30);
    EXPECT_TRUE(curve.truncated);
    EXPECT_EQ(curve.points.size(), 2u);
}

TEST(EntropyCurve, RejectsBadHorizons) {
    EXPECT_THROW(empirical_entropy_curve(interval(0, 1), practical(0.1), 1.0, {2, 1}),
                 ConfigError);
    EXPECT_THROW(empirical_entropy_curve(interval(0, 1), practical(0.1), 1.0, {0}), ConfigError);
}

TEST(EntropyReport, LinearBoundsConsistent) {
    const auto model = make_benchmark("linear-2d").model;
    for (auto kind : {StabilityKind::Practical, StabilityKind::PracticalExponential,
                      StabilityKind::Exponential}) {
        const StabilityClass s{kind, RateFunction(), 0.7, 0.1};
        const auto r = make_entropy_report(model, s, -1.0, {1, 2}, {0.1}, light_sampling());
        EXPECT_TRUE(r.consistent()) << to_string(kind) << " " << r.lower << " " << r.upper;
        EXPECT_DOUBLE_EQ(r.trace_inf.value, -4.0);
        EXPECT_EQ(r.curves.size(), 1u);
    }
}

TEST(EntropyReport, ExponentialCaseFields) {
    const auto model = make_benchmark("linear-2d").model;
    const StabilityClass s{StabilityKind::Exponential, RateFunction(), 1.0, 0.1};
    const auto r = make_entropy_report(model, s, -2.0, {1}, {0.1}, light_sampling());
    EXPECT_EQ(r.entropy_case, EntropyCase::IV);
    ASSERT_TRUE(r.m_constant.has_value());
    EXPECT_DOUBLE_EQ(*r.m_constant, -1.0);
    EXPECT_DOUBLE_EQ(r.upper, 0.0);
    EXPECT_DOUBLE_EQ(r.lower, -4.0);
}

TEST(Units, NatsToBits) { EXPECT_DOUBLE_EQ(nats_to_bits(std::log(8.0)), 3.0); }
