#include "hmt/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace hmt {

std::vector<FieldViolation> RegularizationParams::violations(const PhysicalParams& params) const {
    std::vector<FieldViolation> out;
    const double cap = std::min({params.rho_bar0, params.rho_bar1, params.theta_bar0,
                                 params.theta_bar1, 1.0});
    if (!(eps > 0 && eps <= cap)) {
        std::ostringstream msg;
        msg << "requires 0<ε<=min{rho_bar0,rho_bar1,theta_bar0,theta_bar1,1} = " << cap
            << ", got " << eps;
        out.push_back({"regularization.eps", msg.str()});
    }
    if (!(nu > 0 && nu < eps)) {
        std::ostringstream msg;
        msg << "requires 0<ν<ε, got nu=" << nu << " eps=" << eps;
        out.push_back({"regularization.nu", msg.str()});
    }
    if (!(s >= 0 && s <= 1)) out.push_back({"regularization.s", "must lie in [0, 1]"});
    return out;
}

std::vector<FieldViolation> StepConfig::violations() const {
    std::vector<FieldViolation> out;
    if (!(dt > 0 && std::isfinite(dt))) out.push_back({"step.dt", "must be positive"});
    if (!(picard_tol > 0)) out.push_back({"step.picard_tol", "must be positive"});
    if (max_picard < 1) out.push_back({"step.max_picard", "must be at least 1"});
    if (s_ramp_steps < 1) out.push_back({"step.s_ramp_steps", "must be at least 1"});
    return out;
}

FaceField evaluate_faces(const std::vector<FaceStencil>& stencils, const Field& u) {
    const std::size_t n = u.size();
    if (stencils.size() != n + 1) throw DimensionMismatch(n + 1, stencils.size());
    FaceField out(n + 1);
    for (std::size_t f = 0; f <= n; ++f) {
        double v = stencils[f].constant;
        if (f > 0) v += stencils[f].left * u[f - 1];
        if (f < n) v += stencils[f].right * u[f];
        out[f] = v;
    }
    return out;
}

Field cell_gradient(const Field& f, const Grid& grid) {
    require_cells(f, grid);
    const std::size_t n = grid.n();
    const double h = grid.h();
    Field g(n);
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2 * h);
    g[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
    g[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
    return g;
}

namespace {

// Arithmetic face average; boundary faces take the adjacent cell value.
FaceField to_faces(const Field& c) {
    const std::size_t n = c.size();
    FaceField f(n + 1);
    f[0] = c[0];
    f[n] = c[n - 1];
    for (std::size_t i = 1; i < n; ++i) f[i] = 0.5 * (c[i - 1] + c[i]);
    return f;
}

Field product(const Field& a, const Field& b) {
    Field out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

void require_dominant(const TridiagonalSystem& sys, const char* name) {
    const std::size_t row = sys.first_non_dominant_row();
    if (row != sys.size() || std::any_of(sys.diag.begin(), sys.diag.end(),
                                         [](double d) { return !(d > 0); }))
        throw DominanceViolation(name, row == sys.size() ? 0 : row);
}

// Adds -(G[i+1] - G[i]) / h for face stencils G to every row.
void add_flux_divergence(TridiagonalSystem& sys, const std::vector<FaceStencil>& g, double h) {
    const std::size_t n = sys.size();
    for (std::size_t i = 0; i < n; ++i) {
        const FaceStencil& west = g[i];
        const FaceStencil& east = g[i + 1];
        sys.diag[i] += (west.right - east.left) / h;
        if (i > 0) sys.lower[i - 1] += west.left / h;
        if (i + 1 < n) sys.upper[i] += -east.right / h;
        sys.rhs[i] += (east.constant - west.constant) / h;
    }
}

void require_forcing_shape(const ForcingSample* forcing, std::size_t n) {
    if (!forcing) return;
    if (forcing->rho_source.size() != n) throw DimensionMismatch(n, forcing->rho_source.size());
    if (forcing->theta_source.size() != n)
        throw DimensionMismatch(n, forcing->theta_source.size());
}

// Robin closure on a half cell: trace = gain * u_adjacent + offset.
struct TraceMap {
    double gain;
    double offset;
};

}  // namespace

FrozenCoefficients freeze_coefficients(const State& iterate, const Problem& problem) {
    const Grid& grid = problem.grid;
    require_cells(iterate.rho, grid);
    require_cells(iterate.theta, grid);
    const double eps = problem.reg.eps;
    const std::size_t n = grid.n();

    FrozenCoefficients c;
    const Field pressure = mollify(product(iterate.rho, iterate.theta), problem.reg.nu, grid);
    c.diffusion = to_faces(pressure);
    for (double& d : c.diffusion) d += eps;

    const Field rho_eps = mollify(iterate.rho, eps, grid);
    const Field drift_cells = mollify(product(rho_eps, cell_gradient(iterate.theta, grid)), eps, grid);
    c.drift = to_faces(drift_cells);

    c.reaction = Field(n);
    c.source = Field(n);
    c.ps_lag = Field(n);
    c.theta_lag = iterate.theta;
    for (std::size_t i = 0; i < n; ++i) {
        const double th = iterate.theta[i];
        c.reaction[i] = cutoff(std::sqrt(std::max(th, 0.0)), eps);
        c.ps_lag[i] = saturation_pressure(problem.saturation, th);
        c.source[i] = cutoff(c.ps_lag[i], eps);
    }
    return c;
}

RhoAssembly assemble_rho_system(const State& prev, const State& iterate, double s,
                                const Problem& problem, double dt, AdvectionScheme scheme,
                                const ForcingSample* forcing) {
    return assemble_rho_system(prev, freeze_coefficients(iterate, problem), s, problem, dt, scheme,
                               forcing);
}

RhoAssembly assemble_rho_system(const State& prev, const FrozenCoefficients& frozen, double s,
                                const Problem& problem, double dt, AdvectionScheme scheme,
                                const ForcingSample* forcing) {
    const Grid& grid = problem.grid;
    const PhysicalParams& p = problem.params;
    const std::size_t n = grid.n();
    const double h = grid.h();
    require_cells(prev.rho, grid);
    require_forcing_shape(forcing, n);

    RhoAssembly out;
    out.flux.assign(n + 1, FaceStencil{});

    // interior: F = D rho_x + v rho_face
    for (std::size_t f = 1; f < n; ++f) {
        const double d = frozen.diffusion[f];
        const double v = frozen.drift[f];
        FaceStencil& st = out.flux[f];
        st.left = -d / h;
        st.right = d / h;
        if (scheme == AdvectionScheme::central) {
            st.left += 0.5 * v;
            st.right += 0.5 * v;
        } else if (v < 0) {
            // transport velocity -v > 0 points right: the left cell is upwind
            st.left += v;
        } else {
            st.right += v;
        }
    }

    // boundary faces: eliminate the trace from D (u - trace)/(h/2) + v trace = Robin flux
    {
        const double d2 = 2 * frozen.diffusion[0] / h;
        const double v = frozen.drift[0];
        const double ambient = s * p.rho_bar0;
        const double extra = forcing ? forcing->rho_flux_left : 0.0;
        const double den = p.alpha0 + d2 - v;
        if (!(den > 0)) throw DominanceViolation("rho", 0);
        const TraceMap tr{d2 / den, (p.alpha0 * ambient - extra) / den};
        out.flux[0] = {0.0, p.alpha0 * tr.gain, p.alpha0 * (tr.offset - ambient) + extra};
    }
    {
        const double d2 = 2 * frozen.diffusion[n] / h;
        const double v = frozen.drift[n];
        const double ambient = s * p.rho_bar1;
        const double extra = forcing ? forcing->rho_flux_right : 0.0;
        const double den = p.alpha1 + d2 + v;
        if (!(den > 0)) throw DominanceViolation("rho", n - 1);
        const TraceMap tr{d2 / den, (p.alpha1 * ambient + extra) / den};
        out.flux[n] = {-p.alpha1 * tr.gain, 0.0, p.alpha1 * (ambient - tr.offset) + extra};
    }

    TridiagonalSystem& sys = out.system;
    sys = TridiagonalSystem(n);
    for (std::size_t i = 0; i < n; ++i) {
        sys.diag[i] = 1.0 / dt + s * frozen.reaction[i];
        sys.rhs[i] = prev.rho[i] / dt + s * frozen.source[i];
        if (forcing) sys.rhs[i] += forcing->rho_source[i];
    }
    add_flux_divergence(sys, out.flux, h);
    require_dominant(sys, "rho");
    return out;
}

ThetaAssembly assemble_theta_system(const State& prev, const State& iterate, const Field& rho_new,
                                    double s, const Problem& problem, double dt,
                                    AdvectionScheme scheme, const ForcingSample* forcing) {
    const FrozenCoefficients frozen = freeze_coefficients(iterate, problem);
    const RhoAssembly rho = assemble_rho_system(prev, frozen, s, problem, dt, scheme, forcing);
    return assemble_theta_system(prev, frozen, rho, rho_new, s, problem, dt, scheme, forcing);
}

ThetaAssembly assemble_theta_system(const State& prev, const FrozenCoefficients& frozen,
                                    const RhoAssembly& rho_assembly, const Field& rho_new, double s,
                                    const Problem& problem, double dt, AdvectionScheme scheme,
                                    const ForcingSample* forcing) {
    const Grid& grid = problem.grid;
    const PhysicalParams& p = problem.params;
    const std::size_t n = grid.n();
    const double h = grid.h();
    require_cells(prev.theta, grid);
    require_cells(rho_new, grid);
    require_forcing_shape(forcing, n);

    ThetaAssembly out;
    out.mass_flux = evaluate_faces(rho_assembly.flux, rho_new);

    const Field rho_eps = mollify(rho_new, problem.reg.eps, grid);
    Field kappa_cells(n);
    for (std::size_t i = 0; i < n; ++i)
        kappa_cells[i] = p.kappa1 + p.kappa2 * rho_eps[i] * rho_eps[i];
    const FaceField kappa = to_faces(kappa_cells);

    out.conduction.assign(n + 1, FaceStencil{});
    out.face_theta.assign(n + 1, FaceStencil{});
    for (std::size_t f = 1; f < n; ++f) {
        out.conduction[f] = {-kappa[f] / h, kappa[f] / h, 0.0};
        if (scheme == AdvectionScheme::central)
            out.face_theta[f] = {0.5, 0.5, 0.0};
        else if (out.mass_flux[f] > 0)
            out.face_theta[f] = {0.0, 1.0, 0.0};  // flow to the left: right cell upwind
        else
            out.face_theta[f] = {1.0, 0.0, 0.0};
    }
    {
        const double k2 = 2 * kappa[0] / h;
        const double ambient = s * p.theta_bar0;
        const double extra = forcing ? forcing->theta_flux_left : 0.0;
        const double den = p.beta0 + k2;
        const TraceMap tr{k2 / den, (p.beta0 * ambient - extra) / den};
        out.conduction[0] = {0.0, p.beta0 * tr.gain, p.beta0 * (tr.offset - ambient) + extra};
        out.face_theta[0] = {0.0, tr.gain, tr.offset};
    }
    {
        const double k2 = 2 * kappa[n] / h;
        const double ambient = s * p.theta_bar1;
        const double extra = forcing ? forcing->theta_flux_right : 0.0;
        const double den = p.beta1 + k2;
        const TraceMap tr{k2 / den, (p.beta1 * ambient + extra) / den};
        out.conduction[n] = {-p.beta1 * tr.gain, 0.0, p.beta1 * (ambient - tr.offset) + extra};
        out.face_theta[n] = {tr.gain, 0.0, tr.offset};
    }

    out.convective.resize(n + 1);
    for (std::size_t f = 0; f <= n; ++f) {
        const double flux = out.mass_flux[f];
        out.convective[f] = {flux * out.face_theta[f].left, flux * out.face_theta[f].right,
                             flux * out.face_theta[f].constant};
    }

    TridiagonalSystem& sys = out.system;
    sys = TridiagonalSystem(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double capacity = rho_new[i] + p.sigma;
        const double exchange = s * rho_new[i] * frozen.reaction[i];
        const double lagged = s * (p.lambda + frozen.theta_lag[i]) * frozen.ps_lag[i];
        sys.diag[i] = capacity / dt - exchange;
        sys.rhs[i] = capacity * prev.theta[i] / dt + p.lambda * exchange - lagged;
        if (forcing) sys.rhs[i] += forcing->theta_source[i];
    }
    add_flux_divergence(sys, out.conduction, h);

    // -F theta_x as -[F_e (theta_e - theta_i) + F_w (theta_i - theta_w)] / h
    for (std::size_t i = 0; i < n; ++i) {
        const FaceStencil& west = out.convective[i];
        const FaceStencil& east = out.convective[i + 1];
        const double f_west = out.mass_flux[i];
        const double f_east = out.mass_flux[i + 1];
        sys.diag[i] += (f_east - east.left) / h + (west.right - f_west) / h;
        if (i + 1 < n) sys.upper[i] += -east.right / h;
        if (i > 0) sys.lower[i - 1] += west.left / h;
        sys.rhs[i] += (east.constant - west.constant) / h;
    }
    require_dominant(sys, "theta");
    return out;
}

State mollified_initial_data(const InitialData& data, const RegularizationParams& reg,
                             const Grid& grid) {
    State s;
    s.rho = mollify(data.rho0, reg.eps, grid);
    for (double& v : s.rho) v += reg.eps;
    s.theta = mollify(data.theta0, reg.eps, grid);
    s.t = 0;
    return s;
}

namespace {

double relative_update(const State& a, const State& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.rho.size(); ++i) {
        const double dr = b.rho[i] - a.rho[i];
        const double dt = b.theta[i] - a.theta[i];
        num += dr * dr + dt * dt;
        den += b.rho[i] * b.rho[i] + b.theta[i] * b.theta[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-30);
}

std::optional<ForcingSample> sample(const Forcing* forcing, double t) {
    if (!forcing || !*forcing) return std::nullopt;
    return (*forcing)(t);
}

StepResult iterate_at(const State& prev, const State& start, double s, const StepConfig& cfg,
                      const Problem& problem, const ForcingSample* forcing) {
    PicardReport report;
    report.s_path = {s};
    State iterate = start;
    for (int k = 1; k <= cfg.max_picard; ++k) {
        StepResult sweep = picard_sweep(prev, iterate, s, cfg, problem, forcing);
        const double update = relative_update(iterate, sweep.state);
        report.iterations = k;
        report.final_update = update;
        iterate = std::move(sweep.state);
        if (update < cfg.picard_tol) {
            report.converged = true;
            return {std::move(iterate), std::move(report), std::move(sweep.trace)};
        }
    }
    throw PicardDivergence(std::move(report), std::move(iterate));
}

}  // namespace

StepResult picard_sweep(const State& prev, const State& iterate, double s, const StepConfig& cfg,
                        const Problem& problem, const ForcingSample* forcing) {
    const double dt = cfg.dt;
    const FrozenCoefficients frozen = freeze_coefficients(iterate, problem);
    const RhoAssembly rho_sys =
        assemble_rho_system(prev, frozen, s, problem, dt, cfg.advection, forcing);
    Field rho_new(solve_thomas(rho_sys.system));
    if (!rho_new.all_finite()) throw NonfiniteIterate("density became nonfinite");

    const ThetaAssembly theta_sys =
        assemble_theta_system(prev, frozen, rho_sys, rho_new, s, problem, dt, cfg.advection, forcing);
    Field theta_new(solve_thomas(theta_sys.system));
    if (!theta_new.all_finite()) throw NonfiniteIterate("temperature became nonfinite");

    const std::size_t n = problem.grid.n();
    StepTrace trace;
    trace.dt = dt;
    trace.s = s;
    trace.reaction = frozen.reaction.vec();
    trace.source = frozen.source.vec();
    trace.theta_lag = frozen.theta_lag.vec();
    trace.ps_lag = frozen.ps_lag.vec();
    trace.mass_flux_left = theta_sys.mass_flux[0];
    trace.mass_flux_right = theta_sys.mass_flux[n];
    const FaceField face_theta = evaluate_faces(theta_sys.face_theta, theta_new);
    const FaceField heat = evaluate_faces(theta_sys.conduction, theta_new);
    trace.theta_face_left = face_theta[0];
    trace.theta_face_right = face_theta[n];
    trace.heat_flux_left = heat[0];
    trace.heat_flux_right = heat[n];

    PicardReport report;
    report.iterations = 1;
    report.s_path = {s};
    report.final_update = relative_update(iterate, State{rho_new, theta_new, prev.t + dt});
    report.converged = report.final_update < cfg.picard_tol;
    return {State{std::move(rho_new), std::move(theta_new), prev.t + dt}, std::move(report),
            std::move(trace)};
}

StepResult picard_step(const State& prev, const StepConfig& cfg, const Problem& problem,
                       const Forcing* forcing) {
    const auto f = sample(forcing, prev.t + cfg.dt);
    return iterate_at(prev, prev, problem.reg.s, cfg, problem, f ? &*f : nullptr);
}

StepResult homotopy_solve(const State& prev, const StepConfig& cfg, const Problem& problem,
                          const Forcing* forcing) {
    const auto f = sample(forcing, prev.t + cfg.dt);
    const ForcingSample* fs = f ? &*f : nullptr;
    const double target = problem.reg.s;

    PicardReport total;
    try {
        return iterate_at(prev, prev, target, cfg, problem, fs);
    } catch (const PicardDivergence& e) {
        total.iterations = e.report().iterations;
        total.s_path = {target};
    } catch (const NonfiniteIterate&) {
        total.iterations = cfg.max_picard;
        total.s_path = {target};
    }

    State warm = prev;
    const int stages = cfg.s_ramp_steps;
    for (int k = 1; k <= stages; ++k) {
        const double s = target * static_cast<double>(k) / stages;
        const bool last = k == stages;
        total.s_path.push_back(s);
        try {
            StepResult r = iterate_at(prev, warm, s, cfg, problem, fs);
            total.iterations += r.report.iterations;
            total.final_update = r.report.final_update;
            if (last) {
                total.converged = true;
                r.report = std::move(total);
                return r;
            }
            warm = std::move(r.state);
        } catch (const PicardDivergence& e) {
            total.iterations += e.report().iterations;
            total.final_update = e.report().final_update;
            if (last) throw PicardDivergence(std::move(total), e.last_iterate());
            // keep going from wherever the stage stopped
            warm = e.last_iterate();
        } catch (const NonfiniteIterate&) {
            total.iterations += cfg.max_picard;
            if (last) throw;
        }
    }
    throw PicardDivergence(std::move(total), std::move(warm));  // unreachable
}

std::size_t step_count(double t_end, double dt) {
    if (!(t_end >= 0) || !(dt > 0)) throw ConfigError("t_end must be >= 0 and dt > 0");
    const double ratio = t_end / dt;
    const auto steps = std::llround(ratio);
    if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("dt must divide t_end");
    return static_cast<std::size_t>(steps);
}

RunResult run(const InitialData& initial, const StepConfig& cfg, const Problem& problem,
              double t_end) {
    return run_from_state(mollified_initial_data(initial, problem.reg, problem.grid), cfg, problem,
                          t_end);
}

RunResult run_from_state(const State& initial, const StepConfig& cfg, const Problem& problem,
                         double t_end, const Forcing* forcing) {
    const std::size_t steps = step_count(t_end, cfg.dt);
    RunResult out;
    out.trajectory.reserve(steps + 1);
    out.records.reserve(steps + 1);
    out.trajectory.push_back(initial);
    out.records.push_back(initial_record(initial, problem.grid, problem.params));
    for (std::size_t k = 1; k <= steps; ++k) {
        const State& prev = out.trajectory.back();
        StepResult r = homotopy_solve(prev, cfg, problem, forcing);
        // pin the clock to k dt so it does not drift with accumulated rounding
        r.state.t = static_cast<double>(k) * cfg.dt;
        out.records.push_back(step_record(prev, r.state, r.trace, r.report.iterations,
                                          out.records.back(), problem.grid, problem.params));
        out.reports.push_back(std::move(r.report));
        out.trajectory.push_back(std::move(r.state));
    }
    return out;
}

}  // namespace hmt
