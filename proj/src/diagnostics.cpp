#include "hmt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hmt {

double total_mass(const State& state, const Grid& grid) {
    double sum = 0.0;
    for (double r : state.rho) sum += r;
    return grid.h() * sum;
}

double mass_energy(const State& state, const Grid& grid, const PhysicalParams& params) {
    double sum = 0.0;
    for (std::size_t i = 0; i < state.rho.size(); ++i) {
        const double r = state.rho[i];
        const double th = state.theta[i];
        sum += params.lambda * r + r * th + params.sigma * th;
    }
    return grid.h() * sum;
}

double entropy(const State& state, const Grid& grid) {
    double sum = 0.0;
    for (double r : state.rho)
        if (r > 0) sum += r * std::log(r);
    return grid.h() * sum;
}

double mass_balance_residual(const State& prev, const State& next, const StepTrace& trace,
                             const Grid& grid) {
    const double h = grid.h();
    double storage = 0.0;
    double exchange = 0.0;
    for (std::size_t i = 0; i < next.rho.size(); ++i) {
        storage += (next.rho[i] - prev.rho[i]) / trace.dt;
        exchange += trace.s * (next.rho[i] * trace.reaction[i] - trace.source[i]);
    }
    return std::abs(h * storage - (trace.mass_flux_right - trace.mass_flux_left) + h * exchange);
}

double energy_balance_residual(const State& prev, const State& next, const StepTrace& trace,
                               const Grid& grid, const PhysicalParams& params) {
    const double h = grid.h();
    const double lam = params.lambda;
    double storage = 0.0;
    double source = 0.0;
    for (std::size_t i = 0; i < next.rho.size(); ++i) {
        const double e_new = (next.rho[i] + params.sigma) * next.theta[i];
        const double e_old = (prev.rho[i] + params.sigma) * prev.theta[i];
        storage += (e_new - e_old) / trace.dt;
        const double cut = trace.source[i];
        // lambda Gamma_eps plus the defect (lambda + theta)(chi(p_s) - p_s)
        source += trace.s * (lam * (next.rho[i] * trace.reaction[i] - cut) +
                             (lam + trace.theta_lag[i]) * (cut - trace.ps_lag[i]));
    }
    const double flux_right = trace.heat_flux_right + trace.mass_flux_right * trace.theta_face_right;
    const double flux_left = trace.heat_flux_left + trace.mass_flux_left * trace.theta_face_left;
    return std::abs(h * storage - (flux_right - flux_left) - h * source);
}

namespace {

void fill_state_monitors(DiagnosticsRecord& r, const State& state, const Grid& grid,
                         const PhysicalParams& params) {
    r.t = state.t;
    r.total_mass = total_mass(state, grid);
    r.mass_energy = mass_energy(state, grid, params);
    r.entropy = entropy(state, grid);
    r.min_rho = *std::min_element(state.rho.begin(), state.rho.end());
    r.min_theta = *std::min_element(state.theta.begin(), state.theta.end());
    r.max_theta = *std::max_element(state.theta.begin(), state.theta.end());
}

double rho4_integral(const State& state, const Grid& grid) {
    double sum = 0.0;
    for (double r : state.rho) sum += r * r * r * r;
    return grid.h() * sum;
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

DiagnosticsRecord initial_record(const State& state, const Grid& grid,
                                 const PhysicalParams& params) {
    DiagnosticsRecord r;
    fill_state_monitors(r, state, grid, params);
    return r;
}

DiagnosticsRecord step_record(const State& prev, const State& next, const StepTrace& trace,
                              int picard_iterations, const DiagnosticsRecord& previous,
                              const Grid& grid, const PhysicalParams& params) {
    DiagnosticsRecord r;
    fill_state_monitors(r, next, grid, params);
    r.mass_balance_residual = mass_balance_residual(prev, next, trace, grid);
    r.energy_balance_residual = energy_balance_residual(prev, next, trace, grid, params);
    r.l4_accumulator = previous.l4_accumulator + trace.dt * rho4_integral(next, grid);
    r.picard_iterations = picard_iterations;
    return r;
}

EnvelopeReport mass_energy_envelope(const std::vector<State>& trajectory, const Grid& grid,
                                    const PhysicalParams& p) {
    EnvelopeReport rep;
    if (trajectory.empty()) {
        rep.passed = true;
        return rep;
    }
    const State& first = trajectory.front();
    const double horizon = trajectory.back().t;
    const double theta_sup = sup_norm(first.theta);
    double rho_l1 = 0.0;
    for (double r : first.rho) rho_l1 += std::abs(r);
    rho_l1 *= grid.h();

    rep.c_t = (p.lambda + theta_sup) * rho_l1 + p.sigma * theta_sup +
              (p.lambda * (p.alpha1 * p.rho_bar1 + p.alpha0 * p.rho_bar0) +
               (p.beta1 * p.theta_bar1 + p.beta0 * p.theta_bar0)) *
                  horizon;
    rep.c_theta = p.alpha1 * p.rho_bar1 + p.alpha0 * p.rho_bar0;

    rep.passed = true;
    rep.min_slack = INFINITY;
    double integral = 0.0;
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        const State& s = trajectory[k];
        if (k > 0) integral += (s.t - trajectory[k - 1].t) * sup_norm(s.theta);
        const double lhs = mass_energy(s, grid, p);
        const double bound = rep.c_t + rep.c_theta * integral;
        rep.lhs.push_back(lhs);
        rep.bound.push_back(bound);
        rep.min_slack = std::min(rep.min_slack, bound - lhs);
        if (!(lhs <= bound) && rep.passed) {
            rep.passed = false;
            rep.first_violation_t = s.t;
        }
    }
    return rep;
}

EnvelopeReport mass_energy_envelope_check(const std::vector<State>& trajectory, const Grid& grid,
                                          const PhysicalParams& params) {
    EnvelopeReport rep = mass_energy_envelope(trajectory, grid, params);
    if (!rep.passed) throw EnvelopeViolation(rep.first_violation_t);
    return rep;
}

EntropyReport entropy_monitor(const std::vector<State>& trajectory, const Grid& grid) {
    EntropyReport rep;
    rep.max_entropy = -INFINITY;
    const double h = grid.h();
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        const State& s = trajectory[k];
        rep.max_entropy = std::max(rep.max_entropy, entropy(s, grid));
        if (k == 0) continue;
        const double dt = s.t - trajectory[k - 1].t;
        double sum = 0.0;
        for (std::size_t f = 1; f < s.rho.size(); ++f) {
            const double grad = (s.rho[f] - s.rho[f - 1]) / h;
            sum += 0.5 * (s.theta[f] + s.theta[f - 1]) * grad * grad;
        }
        rep.dissipation += dt * h * sum;
    }
    if (trajectory.empty()) rep.max_entropy = 0;
    return rep;
}

double l4_norm(const std::vector<State>& trajectory, const Grid& grid) {
    double acc = 0.0;
    for (std::size_t k = 1; k < trajectory.size(); ++k)
        acc += (trajectory[k].t - trajectory[k - 1].t) * rho4_integral(trajectory[k], grid);
    return std::pow(acc, 0.25);
}

std::vector<TestFunction> default_test_family() {
    using std::numbers::pi;
    std::vector<TestFunction> out;
    out.push_back({"1", [](double) { return 1.0; }, [](double) { return 0.0; }});
    out.push_back({"x", [](double x) { return x; }, [](double) { return 1.0; }});
    out.push_back({"x^2", [](double x) { return x * x; }, [](double x) { return 2 * x; }});
    out.push_back({"x^3", [](double x) { return x * x * x; }, [](double x) { return 3 * x * x; }});
    for (int k = 1; k <= 4; ++k) {
        const double w = k * pi;
        out.push_back({"cos(" + std::to_string(k) + "*pi*x)", [w](double x) { return std::cos(w * x); },
                       [w](double x) { return -w * std::sin(w * x); }});
        out.push_back({"sin(" + std::to_string(k) + "*pi*x)", [w](double x) { return std::sin(w * x); },
                       [w](double x) { return w * std::cos(w * x); }});
    }
    return out;
}

double temporal_bump(double t, double horizon) {
    if (!(horizon > 0)) return 0.0;
    const double r = t / horizon;
    if (r >= 1.0) return 0.0;
    if (r <= 0.0) return 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

namespace {

struct LevelResidual {
    double rho = 0;
    double theta = 0;
};

// Spatial part of both identities at one time level, for phi = X(x).
LevelResidual spatial_terms(const State& s, const Grid& grid, const PhysicalParams& p,
                            const SaturationModel& sat, const TestFunction& X, double eps) {
    const std::size_t n = grid.n();
    const double h = grid.h();
    LevelResidual out;

    const double rho_l = 1.5 * s.rho[0] - 0.5 * s.rho[1];
    const double th_l = 1.5 * s.theta[0] - 0.5 * s.theta[1];
    const double rho_r = 1.5 * s.rho[n - 1] - 0.5 * s.rho[n - 2];
    const double th_r = 1.5 * s.theta[n - 1] - 0.5 * s.theta[n - 2];

    // boundary integrals of the identities
    const double mass_l = p.alpha0 * (rho_l - p.rho_bar0);
    const double mass_r = p.alpha1 * (rho_r - p.rho_bar1);
    const double heat_l = p.beta0 * (th_l - p.theta_bar0);
    const double heat_r = p.beta1 * (th_r - p.theta_bar1);
    out.rho += mass_l * X.value(0.0) + mass_r * X.value(1.0);
    out.theta += (mass_l * th_l + heat_l) * X.value(0.0) + (mass_r * th_r + heat_r) * X.value(1.0);

    // flux terms: interior faces cover [x_0, x_{n-1}]
    for (std::size_t f = 1; f < n; ++f) {
        const double pl = s.rho[f - 1] * s.theta[f - 1];
        const double pr = s.rho[f] * s.theta[f];
        const double rho_f = 0.5 * (s.rho[f - 1] + s.rho[f]);
        const double th_f = 0.5 * (s.theta[f - 1] + s.theta[f]);
        const double flux = (pr - pl) / h * rho_f + eps * (s.rho[f] - s.rho[f - 1]) / h;
        const double heat = conductivity(rho_f, p) * (s.theta[f] - s.theta[f - 1]) / h;
        const double dx = X.derivative(grid.face(f));
        out.rho += h * flux * dx;
        out.theta += h * (flux * th_f + heat) * dx;
    }
    // half cells next to the walls carry the Robin fluxes
    const double dl = X.derivative(0.25 * h);
    const double dr = X.derivative(1.0 - 0.25 * h);
    out.rho += 0.5 * h * (mass_l * dl - mass_r * dr);
    out.theta += 0.5 * h * ((mass_l * th_l + heat_l) * dl - (mass_r * th_r + heat_r) * dr);

    for (std::size_t i = 0; i < n; ++i) {
        const double g = phase_change_rate(s.rho[i], s.theta[i], sat);
        const double v = X.value(grid.center(i));
        out.rho += h * g * v;
        out.theta -= h * p.lambda * g * v;
    }
    return out;
}

}  // namespace

WeakResidualReport weak_residual(const std::vector<State>& trajectory, const Grid& grid,
                                 const PhysicalParams& params, const SaturationModel& saturation,
                                 const std::vector<TestFunction>& family, double eps) {
    WeakResidualReport rep;
    if (trajectory.empty()) return rep;
    const double horizon = trajectory.back().t;
    const std::size_t n = grid.n();
    const double h = grid.h();

    for (const TestFunction& X : family) {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = X.value(grid.center(i));

        double r_rho = 0.0;
        double r_theta = 0.0;
        // summation by parts in time, including the initial-data term
        for (std::size_t k = 0; k < trajectory.size(); ++k) {
            const State& s = trajectory[k];
            const double z = temporal_bump(s.t, horizon);
            const double dz =
                k + 1 < trajectory.size() ? temporal_bump(trajectory[k + 1].t, horizon) - z : 0.0;
            const double weight = k == 0 ? dz + z : dz;
            if (weight == 0.0) continue;
            double m = 0.0;
            double e = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                m += s.rho[i] * xs[i];
                e += (s.rho[i] + params.sigma) * s.theta[i] * xs[i];
            }
            r_rho -= weight * h * m;
            r_theta -= weight * h * e;
        }
        for (std::size_t k = 1; k < trajectory.size(); ++k) {
            const State& s = trajectory[k];
            const double z = temporal_bump(s.t, horizon);
            if (z == 0.0) continue;
            const double dt = s.t - trajectory[k - 1].t;
            const LevelResidual lv = spatial_terms(s, grid, params, saturation, X, eps);
            r_rho += dt * z * lv.rho;
            r_theta += dt * z * lv.theta;
        }
        rep.names.push_back(X.name);
        rep.rho.push_back(r_rho);
        rep.theta.push_back(r_theta);
    }
    return rep;
}

}  // namespace hmt
