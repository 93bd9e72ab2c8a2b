#pragma once

// Runtime certification of the a priori estimates and of the weak form.

#include <functional>
#include <string>
#include <vector>

#include "hmt/discretization.hpp"
#include "hmt/model.hpp"
#include "hmt/state.hpp"

namespace hmt {

struct DiagnosticsRecord {
    double t = 0;
    double total_mass = 0;               ///< h sum rho
    double mass_energy = 0;              ///< h sum (lambda rho + rho theta + sigma theta)
    double entropy = 0;                  ///< h sum rho ln rho, 0 ln 0 := 0
    double min_rho = 0;
    double min_theta = 0;
    double max_theta = 0;
    double mass_balance_residual = 0;
    double energy_balance_residual = 0;
    double l4_accumulator = 0;           ///< running int int rho^4
    int picard_iterations = 0;
};

double total_mass(const State& state, const Grid& grid);
double mass_energy(const State& state, const Grid& grid, const PhysicalParams& params);
double entropy(const State& state, const Grid& grid);

/// |h sum (rho' - rho)/dt - (F_right - F_left) + h sum s Gamma_eps| for one
/// accepted step; Gamma_eps uses the frozen quantities of the final sweep.
double mass_balance_residual(const State& prev, const State& next, const StepTrace& trace,
                             const Grid& grid);

/// Residual of the conservative energy form over one step, including the
/// cutoff defect term. Nonzero in general (the stepper advances the
/// nonconservative form); it is first order in dt.
double energy_balance_residual(const State& prev, const State& next, const StepTrace& trace,
                               const Grid& grid, const PhysicalParams& params);

DiagnosticsRecord initial_record(const State& state, const Grid& grid, const PhysicalParams& params);
DiagnosticsRecord step_record(const State& prev, const State& next, const StepTrace& trace,
                              int picard_iterations, const DiagnosticsRecord& previous,
                              const Grid& grid, const PhysicalParams& params);

struct EnvelopeReport {
    double c_t = 0;            ///< constant part of the bound
    double c_theta = 0;        ///< coefficient of int ||theta||_inf
    std::vector<double> lhs;   ///< mass_energy(t)
    std::vector<double> bound; ///< C_T + C int_0^t ||theta||_inf
    double min_slack = 0;
    bool passed = false;
    double first_violation_t = -1;
};

/// Envelope bound over the trajectory; horizon T is the final trajectory time.
EnvelopeReport mass_energy_envelope(const std::vector<State>& trajectory, const Grid& grid,
                                    const PhysicalParams& params);
/// As above, throwing EnvelopeViolation on the first offending time.
EnvelopeReport mass_energy_envelope_check(const std::vector<State>& trajectory, const Grid& grid,
                                          const PhysicalParams& params);

struct EntropyReport {
    double max_entropy = 0;
    double dissipation = 0;  ///< int int theta rho_x^2
};
EntropyReport entropy_monitor(const std::vector<State>& trajectory, const Grid& grid);

/// (int int rho^4 dx dt)^(1/4), rectangle rule on the right end of each step.
double l4_norm(const std::vector<State>& trajectory, const Grid& grid);

/// Spatial factor X(x) of a separable test function X(x) zeta(t).
struct TestFunction {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

/// 1, x, x^2, x^3, cos(k pi x) and sin(k pi x) for k = 1..4.
std::vector<TestFunction> default_test_family();

/// Smooth temporal factor with zeta(0) = 1 vanishing to all orders at t = horizon.
double temporal_bump(double t, double horizon);

struct WeakResidualReport {
    std::vector<std::string> names;
    std::vector<double> rho;    ///< left minus right of the mass identity
    std::vector<double> theta;  ///< left minus right of the energy identity
};

/// Evaluates both weak identities for phi = X(x) zeta(t), midpoint quadrature
/// in x and right-end rectangles in t; the time derivative is moved onto phi
/// by summation by parts. eps = 0 is the unregularised limit form; a positive
/// eps adds the artificial diffusion eps rho_x to the mass flux.
WeakResidualReport weak_residual(const std::vector<State>& trajectory, const Grid& grid,
                                 const PhysicalParams& params, const SaturationModel& saturation,
                                 const std::vector<TestFunction>& family, double eps = 0.0);

}  // namespace hmt
