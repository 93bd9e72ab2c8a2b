#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hmt/model.hpp"
#include "hmt/state.hpp"
#include "support.hpp"

using namespace hmt;
using hmt::testing::unit_params;

TEST(Saturation, PowerLaw) {
    const SaturationModel m{PowerLaw{1, 3}, 1};
    EXPECT_DOUBLE_EQ(saturation_pressure(m, 2), 8);
}

TEST(Saturation, VanishesForNonpositiveTheta) {
    EXPECT_EQ(saturation_pressure({PowerLaw{1, 3}, 1}, -1), 0);
    EXPECT_EQ(saturation_pressure({Exponential{1, 1}, 1}, -1), 0);
    EXPECT_EQ(saturation_pressure({Exponential{1, 1}, 1}, 0), 0);
}

TEST(Saturation, Exponential) {
    EXPECT_NEAR(saturation_pressure({Exponential{1, 1}, 1}, 1), std::exp(-1.0), 1e-15);
}

TEST(PhaseChange, Examples) {
    EXPECT_DOUBLE_EQ(phase_change_rate(1, 1, {PowerLaw{1, 3}, 1}), 0);
    EXPECT_DOUBLE_EQ(phase_change_rate(0, 1, {PowerLaw{1, 3}, 1}), -1);
    EXPECT_DOUBLE_EQ(phase_change_rate(2, 4, {PowerLaw{1.0 / 16, 2}, 1}), 3);
}

TEST(Conductivity, Examples) {
    PhysicalParams p = unit_params();
    p.kappa1 = 1;
    p.kappa2 = 2;
    EXPECT_DOUBLE_EQ(conductivity(3, p), 19);
    EXPECT_DOUBLE_EQ(conductivity(0, p), 1);
    p.kappa1 = 0.5;
    p.kappa2 = 0;
    EXPECT_DOUBLE_EQ(conductivity(7, p), 0.5);
}

TEST(ParamsValidation, ReportsEveryNonpositiveField) {
    PhysicalParams p = unit_params();
    EXPECT_TRUE(p.violations().empty());
    p.alpha0 = 0;
    p.sigma = -1;
    const auto v = p.violations();
    ASSERT_EQ(v.size(), 2u);
    EXPECT_THROW(p.validate(), ValidationError);
}

TEST(SaturationValidation, PowerLawCubicPasses) {
    const ValidationReport r = validate_saturation_assumptions({PowerLaw{1, 3}, 1});
    EXPECT_TRUE(r.passed());
    ASSERT_EQ(r.checks.size(), 3u);
    // ratios are theta^2 and theta exactly
    for (const auto& s : r.checks[0].samples) EXPECT_NEAR(s.ratio, s.theta * s.theta, 1e-12 * s.theta);
    for (const auto& s : r.checks[1].samples) EXPECT_NEAR(s.ratio, s.theta, 1e-12 * s.theta);
}

TEST(SaturationValidation, SlowPowerLawFailsAtInfinity) {
    const ValidationReport r = validate_saturation_assumptions({PowerLaw{1, 1.5}, 1});
    EXPECT_FALSE(r.passed());
    EXPECT_TRUE(r.checks[0].passed);
    EXPECT_FALSE(r.checks[1].passed);
}

TEST(SaturationValidation, ExponentialHasFiniteLimitAndFails) {
    const ValidationReport r = validate_saturation_assumptions({Exponential{1, 1}, 1});
    EXPECT_FALSE(r.checks[1].passed);
    // p_s / theta^2 = exp(-1/theta) -> 1
    EXPECT_NEAR(r.checks[1].samples.back().ratio, 1.0, 1e-5);
}

TEST(SaturationModel, GrowthExponent) {
    EXPECT_TRUE((SaturationModel{PowerLaw{1, 3}, 1}).satisfies_growth_exponent());
    EXPECT_FALSE((SaturationModel{PowerLaw{1, 2}, 1}).satisfies_growth_exponent());
}

TEST(Darcy, UniformPressureGivesZeroInterior) {
    const Grid g(8);
    const State s{Field(8, 2.0), Field(8, 3.0), 0};
    const FaceField u = darcy_velocity(s, g, unit_params());
    for (std::size_t f = 1; f < 8; ++f) EXPECT_EQ(u[f], 0);
}

TEST(Darcy, LinearTemperature) {
    const Grid g(4);
    State s{Field(4, 1.0), Field(4), 0};
    for (std::size_t i = 0; i < 4; ++i) s.theta[i] = g.center(i);
    const FaceField u = darcy_velocity(s, g, unit_params());
    for (std::size_t f = 1; f < 4; ++f) EXPECT_NEAR(u[f], -1.0, 1e-14);
}

TEST(Darcy, RandomFieldMatchesDifferenceOracle) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    const Grid g(16);
    State s{Field(16), Field(16), 0};
    for (std::size_t i = 0; i < 16; ++i) {
        s.rho[i] = u(rng);
        s.theta[i] = u(rng);
    }
    const FaceField v = darcy_velocity(s, g, unit_params());
    for (std::size_t f = 1; f < 16; ++f) {
        const double oracle = -(s.rho[f] * s.theta[f] - s.rho[f - 1] * s.theta[f - 1]) * 16.0;
        EXPECT_NEAR(v[f], oracle, 1e-12);
    }
}

TEST(InitialData, Violations) {
    InitialData d{Field(4, 1.0), Field(4, 1.0), 0.5};
    EXPECT_TRUE(d.violations().empty());
    d.theta0[2] = 0.1;
    d.rho0[1] = -1;
    EXPECT_EQ(d.violations().size(), 2u);
}
