#pragma once

#include <cmath>
#include <string>

#include "hmt/config.hpp"

namespace hmt::testing {

inline std::string source_path(const std::string& rel) { return std::string(HMT_SOURCE_DIR) + "/" + rel; }

inline RunConfig smoke_config() { return load_config(source_path("configs/smoke.json")); }

inline PhysicalParams unit_params(double t_end = 1.0) {
    PhysicalParams p;
    p.sigma = p.lambda = p.kappa1 = p.kappa2 = 1;
    p.alpha0 = p.alpha1 = p.beta0 = p.beta1 = 1;
    p.rho_bar0 = p.rho_bar1 = p.theta_bar0 = p.theta_bar1 = 1;
    p.t_end = t_end;
    return p;
}

inline State uniform_state(std::size_t n, double rho, double theta, double t = 0) {
    return State{Field(n, rho), Field(n, theta), t};
}

// theta_hat uniform, rho_hat = p_s(theta_hat) / sqrt(theta_hat), ambients matched.
struct Equilibrium {
    Problem problem;
    State state;
};

inline Equilibrium equilibrium(std::size_t n, double theta_hat = 1.5, double eps = 1e-2) {
    Equilibrium e;
    e.problem.saturation = {PowerLaw{1, 3}, 1};
    const double rho_hat = saturation_pressure(e.problem.saturation, theta_hat) / std::sqrt(theta_hat);
    e.problem.params = unit_params();
    e.problem.params.rho_bar0 = e.problem.params.rho_bar1 = rho_hat;
    e.problem.params.theta_bar0 = e.problem.params.theta_bar1 = theta_hat;
    e.problem.reg = {eps, eps / 2, 1};
    e.problem.grid = Grid(n);
    e.state = uniform_state(n, rho_hat, theta_hat);
    return e;
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace hmt::testing
