#pragma once

// Nondimensional parameters and constitutive laws: saturation pressure,
// phase-change rate, conductivity and the Darcy velocity diagnostic.

#include <string>
#include <variant>
#include <vector>

#include "hmt/discretization.hpp"
#include "hmt/errors.hpp"

namespace hmt {

struct State;

struct PhysicalParams {
    double sigma = 0;       ///< solid heat-capacity weight
    double lambda = 0;      ///< latent heat
    double kappa1 = 0;      ///< conductivity kappa = kappa1 + kappa2 rho^2
    double kappa2 = 0;
    double alpha0 = 0;      ///< mass transfer, x = 0
    double alpha1 = 0;      ///< mass transfer, x = 1
    double beta0 = 0;       ///< heat transfer, x = 0
    double beta1 = 0;       ///< heat transfer, x = 1
    double rho_bar0 = 0;    ///< ambient density, x = 0
    double rho_bar1 = 0;
    double theta_bar0 = 0;  ///< ambient temperature, x = 0
    double theta_bar1 = 0;
    double t_end = 0;

    /// Every field must be strictly positive and finite.
    [[nodiscard]] std::vector<FieldViolation> violations() const;
    void validate() const;
};

/// p_s(theta) = c theta^q
struct PowerLaw {
    double c = 1;
    double q = 3;
};

/// p_s(theta) = a theta^2 exp(-b / theta)
struct Exponential {
    double a = 1;
    double b = 1;
};

struct SaturationModel {
    std::variant<PowerLaw, Exponential> law = PowerLaw{};
    double eta = 1;

    /// Coefficient-level validity (positivity, q > 1). Compliance with the
    /// growth condition at infinity is checked by validate_saturation_assumptions.
    [[nodiscard]] std::vector<FieldViolation> violations() const;
    /// PowerLaw additionally needs q > 1 + eta.
    [[nodiscard]] bool satisfies_growth_exponent() const;
    [[nodiscard]] std::string describe() const;
};

/// Unmollified initial profiles sampled at cell centres.
struct InitialData {
    Field rho0;
    Field theta0;
    double theta_floor = 0;

    /// rho0 >= 0 and theta0 >= theta_floor > 0 everywhere.
    [[nodiscard]] std::vector<FieldViolation> violations() const;
};

/// Zero for theta <= 0, nondecreasing on the positive axis.
double saturation_pressure(const SaturationModel& model, double theta);

/// Gamma = rho sqrt(max(theta, 0)) - p_s(theta); positive means condensation.
double phase_change_rate(double rho, double theta, const SaturationModel& model);

double conductivity(double rho, const PhysicalParams& params);

struct RatioSample {
    double theta;
    double ratio;
};

struct SaturationCheck {
    std::string name;
    bool passed = false;
    std::vector<RatioSample> samples;
    std::string detail;
};

struct ValidationReport {
    std::vector<SaturationCheck> checks;
    [[nodiscard]] bool passed() const;
};

/// Samples p_s(theta)/theta on a decreasing geometric grid down to 1e-6 and
/// p_s(theta)/theta^(1+eta) on an increasing grid up to 1e6. Throws
/// ModelInvalid when a sample is negative or p_s fails to be monotone.
ValidationReport validate_saturation_assumptions(const SaturationModel& model);

/// u = -(rho theta)_x on interior faces. Boundary faces carry the Robin mass
/// flux (s = 1) divided by the upwind face density.
FaceField darcy_velocity(const State& state, const Grid& grid, const PhysicalParams& params);

}  // namespace hmt
