#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fracdd/errors.hpp"
#include "fracdd/fraccalc.hpp"
#include "fracdd/manufactured.hpp"
#include "oracles.hpp"

using namespace fracdd;

namespace {

PiecewiseLinearTrace tent(double a, double b, double c, double peak) {
    return {{a, b, c}, {0.0, peak, 0.0}};
}

oracle::Polyline as_polyline(const PiecewiseLinearTrace& t) {
    return {t.breakpoints, t.values};
}

} // namespace

TEST(SlopeJumps, TentHasThreeJumps) {
    const auto form = to_slope_jumps(tent(0.0, 1.0, 2.0, 1.0));
    ASSERT_EQ(form.jumps.size(), 3u);
    EXPECT_DOUBLE_EQ(form.jumps[0].coefficient, 1.0);
    EXPECT_DOUBLE_EQ(form.jumps[1].coefficient, -2.0);
    EXPECT_DOUBLE_EQ(form.jumps[2].coefficient, 1.0);
}

TEST(SlopeJumps, CollinearInteriorPointDropped) {
    const PiecewiseLinearTrace t{{0.0, 0.5, 1.0, 2.0}, {0.0, 0.5, 1.0, 0.0}};
    EXPECT_EQ(to_slope_jumps(t).jumps.size(), 3u);
}

TEST(SlopeJumps, InvalidTraceRejected) {
    EXPECT_THROW(to_slope_jumps({{0.0, 1.0, 1.0}, {0.0, 1.0, 0.0}}), ConfigError);
    EXPECT_THROW(to_slope_jumps({{0.0, 1.0, 2.0}, {0.5, 1.0, 0.0}}), ConfigError);
    EXPECT_THROW(to_slope_jumps({{0.0, 1.0}, {0.0}}), ConfigError);
}

TEST(RlDerivative, TentFarFieldValue) {
    const auto form = to_slope_jumps(tent(0.0, 1.0, 2.0, 1.0));
    EXPECT_NEAR(rl_left_deriv(form, 0.6, 3.0), -0.0982461427039164810, 1e-15);
    EXPECT_NEAR(rl_right_deriv(form, 0.6, -1.0), -0.0982461427039164810, 1e-15);
}

TEST(RlDerivative, VanishesBeforeSupport) {
    const auto form = to_slope_jumps(tent(0.0, 1.0, 2.0, 1.0));
    EXPECT_EQ(rl_left_deriv(form, 0.75, -0.5), 0.0);
    EXPECT_EQ(rl_right_deriv(form, 0.75, 2.5), 0.0);
}

TEST(RlDerivative, RightIsMirrorOfLeft) {
    const auto form = to_slope_jumps(PiecewiseLinearTrace{{-0.3, 0.2, 0.9, 1.4}, {0.0, 0.7, -0.4, 0.0}});
    const auto mirrored = reflect(form);
    for (double x : {-0.7, -0.1, 0.4, 1.1, 2.0}) {
        EXPECT_NEAR(rl_right_deriv(form, 0.8, x), rl_left_deriv(mirrored, 0.8, -x), 1e-14);
    }
}

TEST(RlDerivative, OrderOutsideRangeRejected) {
    const auto form = to_slope_jumps(tent(0.0, 1.0, 2.0, 1.0));
    EXPECT_THROW(rl_left_deriv(form, 0.5, 1.0), ConfigError);
    EXPECT_THROW(rl_right_deriv(form, 1.0, 1.0), ConfigError);
}

TEST(RlDerivative, MatchesQuadratureOnRandomTents) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = -1.0 + u(rng);
        const double b = a + 0.1 + u(rng);
        const double c = b + 0.1 + u(rng);
        const auto t = tent(a, b, c, 0.2 + u(rng));
        const auto form = to_slope_jumps(t);
        const double alpha = 0.55 + 0.4 * u(rng);
        const double x = a + (c - a + 1.0) * u(rng);
        const double ref = oracle::rl_left_quadrature(as_polyline(t), alpha, x);
        EXPECT_NEAR(rl_left_deriv(form, alpha, x), ref, 1e-9 * std::max(1.0, std::abs(ref)));
    }
}

TEST(PowerRule, QuadraticAtOne) {
    EXPECT_NEAR(rl_power_rule(2, 1.0, 1.0), 2.0, 1e-14);
    EXPECT_NEAR(rl_power_rule(2, 1.5, 1.0), 2.25675833419102515, 1e-14);
}

TEST(PowerRule, IntegerOrderIsClassicalDerivative) {
    EXPECT_NEAR(rl_power_rule(3, 1.0, 2.0), 12.0, 1e-12);
    EXPECT_NEAR(rl_power_rule(5, 0.0, 1.5), std::pow(1.5, 5), 1e-12);
}

TEST(PowerRule, ConstantAboveOrderOneRejected) {
    EXPECT_THROW(rl_power_rule(0, 1.5, 1.0), ConfigError);
    EXPECT_THROW(rl_power_rule(2, 2.0, 1.0), ConfigError);
    EXPECT_THROW(rl_power_rule(2, 1.5, -1.0), ConfigError);
}

TEST(PowerRule, MatchesBetaIntegral) {
    for (int p = 1; p <= 8; ++p) {
        const double ref = oracle::power_rule_beta(p, 1.5, 0.7);
        EXPECT_NEAR(rl_power_rule(p, 1.5, 0.7), ref, 1e-10 * std::abs(ref)) << "p=" << p;
    }
}

TEST(Polynomial, ProfileDerivative) {
    const auto g = profile_coefficients();
    EXPECT_NEAR(frac_deriv_polynomial(g, 1.5, 1.0), -2.96271863360462789, 1e-12);
    EXPECT_NEAR(frac_deriv_polynomial(g, 1.5, 0.5), 2.97919414031647308, 1e-12);
    EXPECT_NEAR(frac_deriv_polynomial(g, 1.5, 1.5), -1.27235727533579532, 1e-12);
}

TEST(Helpers, PositivePowerAndReciprocalGamma) {
    EXPECT_EQ(positive_power(-1.0, 0.4), 0.0);
    EXPECT_EQ(positive_power(0.0, 0.4), 0.0);
    EXPECT_NEAR(positive_power(4.0, 0.5), 2.0, 1e-15);
    EXPECT_EQ(reciprocal_gamma(0.0), 0.0);
    EXPECT_EQ(reciprocal_gamma(-3.0), 0.0);
    EXPECT_NEAR(reciprocal_gamma(0.5), 1.0 / std::sqrt(std::numbers::pi), 1e-15);
}
