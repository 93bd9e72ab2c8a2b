#pragma once

#include <vector>

#include "hmt/discretization.hpp"

namespace hmt {

/// Density and temperature at cell centres at one time level.
struct State {
    Field rho;
    Field theta;
    double t = 0;

    /// rho >= 0, theta > 0, all entries finite.
    [[nodiscard]] bool satisfies_invariants() const;
};

/// Quantities frozen during the final Picard sweep of an accepted step. The
/// balance diagnostics are evaluated from exactly these numbers.
struct StepTrace {
    double dt = 0;
    double s = 1;
    std::vector<double> reaction;      ///< chi(sqrt(theta_lag)) per cell
    std::vector<double> source;        ///< chi(p_s(theta_lag)) per cell
    std::vector<double> theta_lag;     ///< theta of the frozen iterate
    std::vector<double> ps_lag;        ///< p_s(theta_lag), uncut
    double mass_flux_left = 0;         ///< total mass flux at x = 0
    double mass_flux_right = 0;        ///< total mass flux at x = 1
    double theta_face_left = 0;        ///< theta carried by the convective flux at x = 0
    double theta_face_right = 0;
    double heat_flux_left = 0;         ///< conductive flux kappa theta_x at x = 0
    double heat_flux_right = 0;
};

}  // namespace hmt
