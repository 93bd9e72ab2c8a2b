#include "hmt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hmt {

RunResult run_scenario(const Scenario& sc) {
    return run(sc.initial, sc.step, sc.problem, sc.problem.params.t_end);
}

Certificate certify(const RunResult& result, const Scenario& sc) {
    Certificate c;
    c.min_rho = INFINITY;
    c.min_theta = INFINITY;
    for (std::size_t k = 0; k < result.records.size(); ++k) {
        const DiagnosticsRecord& r = result.records[k];
        c.min_rho = std::min(c.min_rho, r.min_rho);
        c.min_theta = std::min(c.min_theta, r.min_theta);
        if (k == 0) continue;
        const double scale = r.total_mass / sc.step.dt;
        c.max_mass_residual = std::max(c.max_mass_residual, r.mass_balance_residual / scale);
        c.max_energy_residual = std::max(c.max_energy_residual, r.energy_balance_residual);
    }
    c.mass_balance_ok = c.max_mass_residual <= kMassBalanceTolerance;
    c.positivity_ok = c.min_rho > 0 && c.min_theta > 0;
    c.envelope = mass_energy_envelope(result.trajectory, sc.problem.grid, sc.problem.params);
    return c;
}

MMSCase smooth_mms_case() {
    using std::numbers::pi;
    MMSCase m;
    m.name = "smooth";
    m.rho = [](double x, double t) {
        const double e = std::exp(-t);
        const double c = std::cos(pi * x);
        const double s = std::sin(pi * x);
        return Jet{2 + c * e, -pi * s * e, -pi * pi * c * e, -c * e};
    };
    m.theta = [](double x, double t) {
        const double e = std::exp(-t);
        const double c = std::cos(pi * x);
        const double s = std::sin(pi * x);
        return Jet{1 + 0.5 * s * e, 0.5 * pi * c * e, -0.5 * pi * pi * s * e, -0.5 * s * e};
    };
    return m;
}

MMSCase constant_mms_case() {
    MMSCase m;
    m.name = "constant";
    m.rho = [](double, double) { return Jet{1, 0, 0, 0}; };
    m.theta = [](double, double) { return Jet{1, 0, 0, 0}; };
    return m;
}

namespace {

struct LocalTerms {
    double mass_flux;  // F = (eps + rho theta) rho_x + rho^2 theta_x
    double heat_flux;  // kappa theta_x
    double rho_source;
    double theta_source;
};

// With identity mollification the frozen coefficients at the fixed point are
// D = eps + rho theta and v = rho theta_x, so
//   F_x = (rho theta)_x rho_x + (eps + rho theta) rho_xx + 2 rho rho_x theta_x + rho^2 theta_xx,
//   (kappa theta_x)_x = 2 kappa2 rho rho_x theta_x + kappa theta_xx.
LocalTerms local_terms(const Jet& r, const Jet& th, const Problem& pr) {
    const PhysicalParams& p = pr.params;
    const double eps = pr.reg.eps;
    const double s = pr.reg.s;

    const double p_x = r.x * th.v + r.v * th.x;
    const double diff = eps + r.v * th.v;
    const double flux = diff * r.x + r.v * r.v * th.x;
    const double flux_x = p_x * r.x + diff * r.xx + 2 * r.v * r.x * th.x + r.v * r.v * th.xx;
    const double kappa = p.kappa1 + p.kappa2 * r.v * r.v;
    const double heat_x = 2 * p.kappa2 * r.v * r.x * th.x + kappa * th.xx;

    const double root = cutoff(std::sqrt(std::max(th.v, 0.0)), eps);
    const double ps = saturation_pressure(pr.saturation, th.v);
    const double ps_cut = cutoff(ps, eps);

    LocalTerms out;
    out.mass_flux = flux;
    out.heat_flux = kappa * th.x;
    out.rho_source = r.t - flux_x + s * (r.v * root - ps_cut);
    out.theta_source = (r.v + p.sigma) * th.t - heat_x - flux * th.x - s * r.v * root * th.v +
                       s * (p.lambda + th.v) * ps - s * p.lambda * r.v * root;
    return out;
}

}  // namespace

Forcing mms_forcing(const MMSCase& mms, const Problem& problem) {
    return [mms, problem](double t) {
        const Grid& g = problem.grid;
        const PhysicalParams& p = problem.params;
        const double s = problem.reg.s;
        ForcingSample out;
        out.rho_source.resize(g.n());
        out.theta_source.resize(g.n());
        for (std::size_t i = 0; i < g.n(); ++i) {
            const double x = g.center(i);
            const LocalTerms lt = local_terms(mms.rho(x, t), mms.theta(x, t), problem);
            out.rho_source[i] = lt.rho_source;
            out.theta_source[i] = lt.theta_source;
        }
        const Jet r0 = mms.rho(0.0, t);
        const Jet t0 = mms.theta(0.0, t);
        const Jet r1 = mms.rho(1.0, t);
        const Jet t1 = mms.theta(1.0, t);
        const LocalTerms left = local_terms(r0, t0, problem);
        const LocalTerms right = local_terms(r1, t1, problem);
        out.rho_flux_left = left.mass_flux - p.alpha0 * (r0.v - s * p.rho_bar0);
        out.rho_flux_right = right.mass_flux - p.alpha1 * (s * p.rho_bar1 - r1.v);
        out.theta_flux_left = left.heat_flux - p.beta0 * (t0.v - s * p.theta_bar0);
        out.theta_flux_right = right.heat_flux - p.beta1 * (s * p.theta_bar1 - t1.v);
        return out;
    };
}

double MMSStudy::finest_order() const {
    if (rows.size() < 2) return 0;
    return std::min(rows.back().order_rho, rows.back().order_theta);
}

MMSStudy mms_study(const MMSCase& mms, const PhysicalParams& params,
                   const SaturationModel& saturation, const MMSSettings& settings,
                   const StepConfig& base) {
    MMSStudy study;
    study.scheme = base.advection;
    for (std::size_t n : settings.rungs) {
        Problem pr{params, saturation, RegularizationParams{settings.eps, settings.nu, 1.0}, Grid(n)};
        const double nn = static_cast<double>(n);
        const double steps = base.advection == AdvectionScheme::central
                                 ? std::round(settings.central_steps * nn * nn)
                                 : std::round(settings.upwind_steps * nn);
        StepConfig cfg = base;
        cfg.dt = settings.t_end / std::max(steps, 1.0);

        State init;
        init.rho = Field(n);
        init.theta = Field(n);
        for (std::size_t i = 0; i < n; ++i) {
            init.rho[i] = mms.rho(pr.grid.center(i), 0.0).v;
            init.theta[i] = mms.theta(pr.grid.center(i), 0.0).v;
        }
        const Forcing forcing = mms_forcing(mms, pr);
        const RunResult res = run_from_state(init, cfg, pr, settings.t_end, &forcing);
        const State& last = res.trajectory.back();

        MMSRow row;
        row.n = n;
        row.h = pr.grid.h();
        row.dt = cfg.dt;
        double er = 0.0;
        double et = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = pr.grid.center(i);
            er += std::pow(last.rho[i] - mms.rho(x, last.t).v, 2);
            et += std::pow(last.theta[i] - mms.theta(x, last.t).v, 2);
        }
        row.error_rho = std::sqrt(row.h * er);
        row.error_theta = std::sqrt(row.h * et);
        if (!study.rows.empty()) {
            const MMSRow& prev = study.rows.back();
            const double ratio = std::log(prev.h / row.h);
            row.order_rho = std::log(prev.error_rho / row.error_rho) / ratio;
            row.order_theta = std::log(prev.error_theta / row.error_theta) / ratio;
        }
        study.rows.push_back(row);
    }
    return study;
}

double LadderConfig::eps(int j) const { return eps0 * std::ldexp(1.0, -j); }

bool LadderResult::passed() const {
    return monotone && entropy_variation <= kLadderMonitorTolerance &&
           l4_variation <= kLadderMonitorTolerance;
}

double space_time_distance(const std::vector<State>& a, const std::vector<State>& b,
                           const Grid& grid) {
    if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
    double acc = 0.0;
    for (std::size_t k = 1; k < a.size(); ++k) {
        const double dt = a[k].t - a[k - 1].t;
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.n(); ++i) {
            const double dr = a[k].rho[i] - b[k].rho[i];
            const double dth = a[k].theta[i] - b[k].theta[i];
            sum += dr * dr + dth * dth;
        }
        acc += dt * grid.h() * sum;
    }
    return std::sqrt(acc);
}

LadderResult regularization_ladder(const Scenario& base, const LadderConfig& ladder) {
    LadderResult out;
    std::vector<State> previous;
    for (int j = 0; j < ladder.rungs; ++j) {
        Scenario sc = base;
        sc.problem.reg.eps = ladder.eps(j);
        sc.problem.reg.nu = ladder.nu(j);
        if (ladder.fault_rung && *ladder.fault_rung == j)
            for (double& r : sc.initial.rho0) r += ladder.fault_rho_shift;
        RunResult res = run_scenario(sc);

        LadderRung rung;
        rung.eps = sc.problem.reg.eps;
        rung.nu = sc.problem.reg.nu;
        rung.max_entropy = entropy_monitor(res.trajectory, sc.problem.grid).max_entropy;
        rung.l4 = l4_norm(res.trajectory, sc.problem.grid);
        rung.certificate = certify(res, sc);
        out.rungs.push_back(rung);

        if (j > 0)
            out.differences.push_back(
                space_time_distance(previous, res.trajectory, sc.problem.grid));
        previous = std::move(res.trajectory);
    }
    out.monotone = true;
    for (std::size_t k = 1; k < out.differences.size(); ++k)
        if (!(out.differences[k] < out.differences[k - 1])) out.monotone = false;
    if (out.rungs.size() >= 2) {
        const LadderRung& a = out.rungs[out.rungs.size() - 2];
        const LadderRung& b = out.rungs.back();
        const auto rel = [](double x, double y) {
            return std::abs(y - x) / std::max(std::abs(x), 1e-300);
        };
        out.entropy_variation = rel(a.max_entropy, b.max_entropy);
        out.l4_variation = rel(a.l4, b.l4);
    }
    return out;
}

void set_physical_param(PhysicalParams& p, const std::string& name, double value) {
    const std::pair<const char*, double PhysicalParams::*> fields[] = {
        {"sigma", &PhysicalParams::sigma},           {"lambda", &PhysicalParams::lambda},
        {"kappa1", &PhysicalParams::kappa1},         {"kappa2", &PhysicalParams::kappa2},
        {"alpha0", &PhysicalParams::alpha0},         {"alpha1", &PhysicalParams::alpha1},
        {"beta0", &PhysicalParams::beta0},           {"beta1", &PhysicalParams::beta1},
        {"rho_bar0", &PhysicalParams::rho_bar0},     {"rho_bar1", &PhysicalParams::rho_bar1},
        {"theta_bar0", &PhysicalParams::theta_bar0}, {"theta_bar1", &PhysicalParams::theta_bar1},
        {"t_end", &PhysicalParams::t_end},
    };
    for (const auto& [key, member] : fields) {
        if (name == key) {
            p.*member = value;
            return;
        }
    }
    throw ConfigError("unknown sweep parameter '" + name + "'");
}

namespace {

void cartesian(const std::vector<SweepAxis>& axes, std::size_t depth,
               std::vector<std::pair<std::string, double>>& current,
               std::vector<std::vector<std::pair<std::string, double>>>& out) {
    if (depth == axes.size()) {
        out.push_back(current);
        return;
    }
    std::vector<double> values = axes[depth].values;
    std::sort(values.begin(), values.end());
    for (double v : values) {
        current.emplace_back(axes[depth].param, v);
        cartesian(axes, depth + 1, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<SweepCell> sweep(const Scenario& base, const std::vector<SweepAxis>& axes) {
    std::vector<std::vector<std::pair<std::string, double>>> keys;
    std::vector<std::pair<std::string, double>> current;
    cartesian(axes, 0, current, keys);

    std::vector<SweepCell> cells;
    cells.reserve(keys.size());
    for (auto& key : keys) {
        SweepCell cell;
        cell.key = key;
        try {
            Scenario sc = base;
            for (const auto& [name, value] : key) set_physical_param(sc.problem.params, name, value);
            auto v = sc.problem.params.violations();
            auto r = sc.problem.reg.violations(sc.problem.params);
            v.insert(v.end(), r.begin(), r.end());
            if (!v.empty()) throw ValidationError(std::move(v));
            RunResult res = run_scenario(sc);
            cell.certificate = certify(res, sc);
            cell.records = std::move(res.records);
        } catch (const ConfigError& e) {
            cell.status = CellStatus::config_error;
            cell.message = e.what();
        } catch (const Error& e) {
            cell.status = CellStatus::solver_error;
            cell.message = e.what();
        }
        cells.push_back(std::move(cell));
    }
    return cells;
}

}  // namespace hmt
