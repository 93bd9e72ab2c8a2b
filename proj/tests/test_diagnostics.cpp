#include <gtest/gtest.h>

#include <cmath>

#include "hmt/harness.hpp"
#include "support.hpp"

using namespace hmt;
using hmt::testing::equilibrium;
using hmt::testing::smoke_config;
using hmt::testing::uniform_state;
using hmt::testing::unit_params;

namespace {

std::vector<State> constant_trajectory(std::size_t n, double rho, double theta, int steps, double T) {
    std::vector<State> out;
    for (int k = 0; k <= steps; ++k) out.push_back(uniform_state(n, rho, theta, T * k / steps));
    return out;
}

double integrated_energy_residual(const RunResult& r, double dt) {
    double acc = 0;
    for (std::size_t k = 1; k < r.records.size(); ++k) acc += dt * r.records[k].energy_balance_residual;
    return acc;
}

Scenario smoke_at(std::size_t n, double dt, double eps) {
    Scenario sc = smoke_config().scenario;
    const Grid g(n);
    sc.problem.grid = g;
    sc.problem.reg.eps = eps;
    sc.problem.reg.nu = eps / 2;
    sc.step.dt = dt;
    // resample the bump profiles on the new grid
    sc.initial.rho0 = Field(n);
    sc.initial.theta0 = Field(n);
    for (std::size_t i = 0; i < n; ++i) {
        sc.initial.rho0[i] = 0.2 + 1.5 * bump_profile((g.center(i) - 0.5) / 0.4);
        sc.initial.theta0[i] = 1 + 0.5 * bump_profile((g.center(i) - 0.4) / 0.3);
    }
    return sc;
}

}  // namespace

TEST(Functionals, EntropyExamples) {
    const Grid g(10);
    EXPECT_EQ(entropy(uniform_state(10, 1.0, 1.0), g), 0.0);
    EXPECT_NEAR(entropy(uniform_state(10, std::exp(1.0), 1.0), g), std::exp(1.0), 1e-14);
    EXPECT_EQ(entropy(uniform_state(10, 0.0, 1.0), g), 0.0);
}

TEST(Functionals, MassAndMassEnergy) {
    const Grid g(8);
    PhysicalParams p = unit_params();
    p.lambda = 2;
    p.sigma = 3;
    const State s = uniform_state(8, 0.5, 2.0);
    EXPECT_NEAR(total_mass(s, g), 0.5, 1e-15);
    EXPECT_NEAR(mass_energy(s, g, p), 2 * 0.5 + 0.5 * 2 + 3 * 2, 1e-14);
}

TEST(EntropyMonitor, ConstantTrajectories) {
    const Grid g(10);
    EXPECT_NEAR(entropy_monitor(constant_trajectory(10, 1.0, 1.0, 5, 1.0), g).max_entropy, 0, 1e-15);
    const EntropyReport e = entropy_monitor(constant_trajectory(10, std::exp(1.0), 2.0, 5, 1.0), g);
    EXPECT_NEAR(e.max_entropy, std::exp(1.0), 1e-14);
    EXPECT_EQ(e.dissipation, 0.0);
}

TEST(L4Norm, ConstantTrajectories) {
    const Grid g(10);
    EXPECT_NEAR(l4_norm(constant_trajectory(10, 1.0, 1.0, 20, 1.0), g), 1.0, 1e-14);
    EXPECT_NEAR(l4_norm(constant_trajectory(10, 2.0, 1.0, 20, 1.0), g), 2.0, 1e-14);
}

TEST(MassBalance, SmokeStepsAreMachinePrecision) {
    const RunConfig cfg = smoke_config();
    const RunResult r = run_scenario(cfg.scenario);
    const double dt = cfg.scenario.step.dt;
    for (std::size_t k = 1; k < r.records.size(); ++k)
        EXPECT_LE(r.records[k].mass_balance_residual / (r.records[k].total_mass / dt), 1e-10);
}

TEST(MassBalance, CentralSchemeTelescopes) {
    Scenario sc = smoke_config().scenario;
    sc.step.advection = AdvectionScheme::central;
    sc.problem.params.t_end = 0.1;
    const RunResult r = run_scenario(sc);
    for (std::size_t k = 1; k < r.records.size(); ++k)
        EXPECT_LE(r.records[k].mass_balance_residual / (r.records[k].total_mass / sc.step.dt), 1e-10);
}

TEST(MassBalance, UniformSealedCellBookkeepingIsExact) {
    Problem pr;
    pr.params = unit_params();
    pr.params.alpha0 = pr.params.alpha1 = 0;
    pr.saturation = {PowerLaw{1, 3}, 1};
    pr.reg = {1e-2, 5e-3, 1};
    pr.grid = Grid(4);
    const State prev = uniform_state(4, 0.5, 1.2);
    StepConfig cfg;
    const StepResult r = homotopy_solve(prev, cfg, pr);
    EXPECT_LE(mass_balance_residual(prev, r.state, r.trace, pr.grid), 1e-13);
}

TEST(MassBalance, SealedMassChangesOnlyByPhaseChange) {
    Scenario sc = smoke_config().scenario;
    sc.problem.params.alpha0 = sc.problem.params.alpha1 = 0;
    const State prev = mollified_initial_data(sc.initial, sc.problem.reg, sc.problem.grid);
    const StepResult r = homotopy_solve(prev, sc.step, sc.problem);
    const Grid& g = sc.problem.grid;
    EXPECT_EQ(r.trace.mass_flux_left, 0.0);
    EXPECT_EQ(r.trace.mass_flux_right, 0.0);
    double gamma = 0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        ASSERT_LT(r.trace.reaction[i], 1 / sc.problem.reg.eps);
        ASSERT_LT(r.trace.source[i], 1 / sc.problem.reg.eps);
        gamma += g.h() * (r.state.rho[i] * r.trace.reaction[i] - r.trace.source[i]);
    }
    const double dmass = (total_mass(r.state, g) - total_mass(prev, g)) / sc.step.dt;
    EXPECT_NEAR(dmass, -gamma, 1e-12 * std::abs(gamma) + 1e-13);
}

TEST(EnergyBalance, EquilibriumRunIsStationary) {
    const auto e = equilibrium(32);
    StepConfig cfg;
    cfg.dt = 1e-2;
    const RunResult r = run_from_state(e.state, cfg, e.problem, 1.0);
    for (std::size_t k = 1; k < r.records.size(); ++k)
        EXPECT_LE(r.records[k].energy_balance_residual, 1e-10);
}

TEST(EnergyBalance, SealedAdiabaticEquilibriumConserves) {
    auto e = equilibrium(32, 1.2);
    PhysicalParams& p = e.problem.params;
    p.alpha0 = p.alpha1 = p.beta0 = p.beta1 = 0;
    StepConfig cfg;
    cfg.dt = 1e-2;
    const RunResult r = run_from_state(e.state, cfg, e.problem, 1.0);
    const Grid& g = e.problem.grid;
    auto heat = [&](const State& s) {
        double acc = 0;
        for (std::size_t i = 0; i < g.n(); ++i) acc += g.h() * (s.rho[i] * s.theta[i] + p.sigma * s.theta[i]);
        return acc;
    };
    const double h0 = heat(r.trajectory.front());
    for (const State& s : r.trajectory) EXPECT_NEAR(heat(s), h0, 1e-9);
}

TEST(EnergyBalance, FirstOrderUnderRefinement) {
    // eps below both grid spacings keeps the mollifier the identity on both levels
    const double eps = 5e-3;
    const Scenario coarse = smoke_at(100, 1e-3, eps);
    const Scenario fine = smoke_at(200, 5e-4, eps);
    const double rc = integrated_energy_residual(run_scenario(coarse), 1e-3);
    const double rf = integrated_energy_residual(run_scenario(fine), 5e-4);
    EXPECT_GE(rc / rf, 1.8) << "coarse " << rc << " fine " << rf;
}

TEST(Envelope, InitialValueIsDominatedByConstant) {
    const RunConfig cfg = smoke_config();
    const Problem& pr = cfg.scenario.problem;
    const State s0 = mollified_initial_data(cfg.scenario.initial, pr.reg, pr.grid);
    const EnvelopeReport e = mass_energy_envelope({s0}, pr.grid, pr.params);
    EXPECT_TRUE(e.passed);
    EXPECT_LE(e.lhs[0], e.c_t);
    EXPECT_EQ(e.bound[0], e.c_t);
}

TEST(Envelope, EquilibriumHoldsWithSlack) {
    const auto e = equilibrium(32);
    StepConfig cfg;
    cfg.dt = 1e-2;
    const RunResult r = run_from_state(e.state, cfg, e.problem, 1.0);
    const EnvelopeReport env = mass_energy_envelope_check(r.trajectory, e.problem.grid, e.problem.params);
    EXPECT_TRUE(env.passed);
    EXPECT_GT(env.min_slack, 1.0);
}

TEST(Envelope, SmokeHoldsEverywhere) {
    const RunConfig cfg = smoke_config();
    const RunResult r = run_scenario(cfg.scenario);
    const EnvelopeReport env =
        mass_energy_envelope(r.trajectory, cfg.scenario.problem.grid, cfg.scenario.problem.params);
    EXPECT_TRUE(env.passed);
    EXPECT_EQ(env.lhs.size(), r.trajectory.size());
    for (std::size_t k = 0; k < env.lhs.size(); ++k) EXPECT_LE(env.lhs[k], env.bound[k]);
}

TEST(Envelope, ViolationThrowsWithTime) {
    const Grid g(8);
    const PhysicalParams p = unit_params();
    std::vector<State> traj{uniform_state(8, 1.0, 1.0, 0.0), uniform_state(8, 50.0, 1.0, 0.5)};
    EXPECT_FALSE(mass_energy_envelope(traj, g, p).passed);
    try {
        (void)mass_energy_envelope_check(traj, g, p);
        FAIL() << "expected EnvelopeViolation";
    } catch (const EnvelopeViolation& e) {
        EXPECT_DOUBLE_EQ(e.time(), 0.5);
    }
}

TEST(WeakResidual, ZeroTestFunctionGivesZero) {
    const RunConfig cfg = smoke_config();
    Scenario sc = cfg.scenario;
    sc.problem.params.t_end = 0.05;
    const RunResult r = run_scenario(sc);
    const std::vector<TestFunction> zero{{"0", [](double) { return 0.0; }, [](double) { return 0.0; }}};
    const WeakResidualReport w =
        weak_residual(r.trajectory, sc.problem.grid, sc.problem.params, sc.problem.saturation, zero);
    ASSERT_EQ(w.rho.size(), 1u);
    EXPECT_EQ(w.rho[0], 0.0);
    EXPECT_EQ(w.theta[0], 0.0);
}

TEST(WeakResidual, EquilibriumCancels) {
    const auto e = equilibrium(64);
    StepConfig cfg;
    cfg.dt = 1e-2;
    const RunResult r = run_from_state(e.state, cfg, e.problem, 1.0);
    const std::vector<TestFunction> one{{"1", [](double) { return 1.0; }, [](double) { return 0.0; }}};
    const WeakResidualReport w =
        weak_residual(r.trajectory, e.problem.grid, e.problem.params, e.problem.saturation, one);
    EXPECT_LE(std::abs(w.rho[0]), 1e-6);
    EXPECT_LE(std::abs(w.theta[0]), 1e-6);
}

TEST(WeakResidual, FamilyHasTwelveMembers) {
    const auto fam = default_test_family();
    ASSERT_EQ(fam.size(), 12u);
    EXPECT_EQ(fam[0].name, "1");
    EXPECT_EQ(fam[5].name, "sin(1*pi*x)");
    for (const auto& f : fam) {
        const double x = 0.37, d = 1e-6;
        EXPECT_NEAR((f.value(x + d) - f.value(x - d)) / (2 * d), f.derivative(x), 1e-6) << f.name;
    }
}

TEST(WeakResidual, TemporalBump) {
    EXPECT_DOUBLE_EQ(temporal_bump(0, 2), 1.0);
    EXPECT_EQ(temporal_bump(2, 2), 0.0);
    EXPECT_LT(temporal_bump(1.9, 2), 1e-3);
    EXPECT_GT(temporal_bump(1.0, 2), temporal_bump(1.5, 2));
}
