#include "hmt/model.hpp"

#include <cmath>
#include <sstream>

#include "hmt/state.hpp"

namespace hmt {

namespace {

void require_positive(std::vector<FieldViolation>& out, const char* name, double v) {
    if (!(std::isfinite(v) && v > 0)) {
        std::ostringstream msg;
        msg << "must be a positive finite number, got " << v;
        out.push_back({name, msg.str()});
    }
}

}  // namespace

std::vector<FieldViolation> PhysicalParams::violations() const {
    std::vector<FieldViolation> out;
    require_positive(out, "sigma", sigma);
    require_positive(out, "lambda", lambda);
    require_positive(out, "kappa1", kappa1);
    require_positive(out, "kappa2", kappa2);
    require_positive(out, "alpha0", alpha0);
    require_positive(out, "alpha1", alpha1);
    require_positive(out, "beta0", beta0);
    require_positive(out, "beta1", beta1);
    require_positive(out, "rho_bar0", rho_bar0);
    require_positive(out, "rho_bar1", rho_bar1);
    require_positive(out, "theta_bar0", theta_bar0);
    require_positive(out, "theta_bar1", theta_bar1);
    require_positive(out, "t_end", t_end);
    return out;
}

void PhysicalParams::validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
}

std::vector<FieldViolation> SaturationModel::violations() const {
    std::vector<FieldViolation> out;
    require_positive(out, "eta", eta);
    if (const auto* p = std::get_if<PowerLaw>(&law)) {
        require_positive(out, "c", p->c);
        if (!(p->q > 1)) out.push_back({"q", "power-law exponent must exceed 1"});
    } else {
        const auto& e = std::get<Exponential>(law);
        require_positive(out, "a", e.a);
        require_positive(out, "b", e.b);
    }
    return out;
}

bool SaturationModel::satisfies_growth_exponent() const {
    if (const auto* p = std::get_if<PowerLaw>(&law)) return p->q > 1 + eta;
    return true;
}

std::string SaturationModel::describe() const {
    std::ostringstream s;
    if (const auto* p = std::get_if<PowerLaw>(&law))
        s << "power_law(c=" << p->c << ", q=" << p->q << ")";
    else {
        const auto& e = std::get<Exponential>(law);
        s << "exponential(a=" << e.a << ", b=" << e.b << ")";
    }
    s << ", eta=" << eta;
    return s.str();
}

double saturation_pressure(const SaturationModel& model, double theta) {
    if (!(theta > 0)) return 0.0;
    if (const auto* p = std::get_if<PowerLaw>(&model.law)) return p->c * std::pow(theta, p->q);
    const auto& e = std::get<Exponential>(model.law);
    return e.a * theta * theta * std::exp(-e.b / theta);
}

double phase_change_rate(double rho, double theta, const SaturationModel& model) {
    return rho * std::sqrt(std::max(theta, 0.0)) - saturation_pressure(model, theta);
}

double conductivity(double rho, const PhysicalParams& params) {
    return params.kappa1 + params.kappa2 * rho * rho;
}

bool ValidationReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

namespace {

constexpr double kThetaMin = 1e-6;
constexpr double kThetaMax = 1e6;
constexpr int kPerDecade = 4;
// Minimal log-log slope over the last sampled decade that we accept as
// "still heading to the limit" rather than levelling off.
constexpr double kMinDecadeSlope = 0.05;

std::vector<double> geometric(double from, double to) {
    const int decades = static_cast<int>(std::lround(std::abs(std::log10(to / from))));
    const int count = decades * kPerDecade;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count) + 1);
    for (int k = 0; k <= count; ++k)
        out.push_back(from * std::pow(to / from, static_cast<double>(k) / count));
    return out;
}

// True when the samples are strictly monotone in the requested direction and
// the last decade still shows a power-law trend.
bool monotone_with_trend(const std::vector<RatioSample>& s, bool decreasing, std::string& detail) {
    for (std::size_t k = 1; k < s.size(); ++k) {
        const bool ok = decreasing ? (s[k].ratio < s[k - 1].ratio || s[k].ratio == 0.0)
                                   : s[k].ratio > s[k - 1].ratio;
        if (!ok) {
            std::ostringstream msg;
            msg << "ratio not strictly " << (decreasing ? "decreasing" : "increasing") << " at theta="
                << s[k].theta;
            detail = msg.str();
            return false;
        }
    }
    const auto& last = s.back();
    const auto& prev = s[s.size() - 1 - kPerDecade];
    if (!(last.ratio > 0 && prev.ratio > 0)) {
        // ratio hit exactly zero going down: that is the limit itself
        detail = decreasing ? "ratio reached 0" : "ratio vanished";
        return decreasing;
    }
    const double slope =
        std::abs(std::log(last.ratio / prev.ratio) / std::log(last.theta / prev.theta));
    std::ostringstream msg;
    msg << "last-decade log-log slope " << slope;
    detail = msg.str();
    return slope >= kMinDecadeSlope;
}

}  // namespace

ValidationReport validate_saturation_assumptions(const SaturationModel& model) {
    ValidationReport report;

    SaturationCheck small{"p_s(theta)/theta -> 0 as theta -> 0", false, {}, {}};
    for (double th : geometric(1.0, kThetaMin)) {
        const double p = saturation_pressure(model, th);
        if (p < 0) throw ModelInvalid("p_s negative at theta=" + std::to_string(th));
        small.samples.push_back({th, p / th});
    }
    small.passed = monotone_with_trend(small.samples, true, small.detail);
    report.checks.push_back(std::move(small));

    SaturationCheck large{"p_s(theta)/theta^(1+eta) -> inf as theta -> inf", false, {}, {}};
    for (double th : geometric(1.0, kThetaMax)) {
        const double p = saturation_pressure(model, th);
        if (p < 0) throw ModelInvalid("p_s negative at theta=" + std::to_string(th));
        large.samples.push_back({th, p / std::pow(th, 1.0 + model.eta)});
    }
    large.passed = monotone_with_trend(large.samples, false, large.detail);
    report.checks.push_back(std::move(large));

    SaturationCheck mono{"p_s nondecreasing on (0, theta_max]", true, {}, {}};
    double last = 0.0;
    for (double th : geometric(kThetaMin, kThetaMax)) {
        const double p = saturation_pressure(model, th);
        if (p < 0) throw ModelInvalid("p_s negative at theta=" + std::to_string(th));
        if (p < last) throw ModelInvalid("p_s decreases at theta=" + std::to_string(th));
        mono.samples.push_back({th, p});
        last = p;
    }
    mono.detail = "monotone over sampled range";
    report.checks.push_back(std::move(mono));
    return report;
}

FaceField darcy_velocity(const State& state, const Grid& grid, const PhysicalParams& params) {
    require_cells(state.rho, grid);
    require_cells(state.theta, grid);
    const std::size_t n = grid.n();
    FaceField u(n + 1, 0.0);
    for (std::size_t f = 1; f < n; ++f) {
        const double p_left = state.rho[f - 1] * state.theta[f - 1];
        const double p_right = state.rho[f] * state.theta[f];
        u[f] = -(p_right - p_left) / grid.h();
    }
    // u = -F / rho with the density taken from the upwind side of the face
    const double flux_left = robin_mass_flux(state.rho[0], Side::left, 1.0, params);
    const bool inflow_left = -flux_left > 0;
    const double rho_left = inflow_left ? params.rho_bar0 : state.rho[0];
    u[0] = rho_left > 0 ? -flux_left / rho_left : 0.0;

    const double flux_right = robin_mass_flux(state.rho[n - 1], Side::right, 1.0, params);
    const bool inflow_right = -flux_right < 0;
    const double rho_right = inflow_right ? params.rho_bar1 : state.rho[n - 1];
    u[n] = rho_right > 0 ? -flux_right / rho_right : 0.0;
    return u;
}

std::vector<FieldViolation> InitialData::violations() const {
    std::vector<FieldViolation> out;
    if (rho0.size() != theta0.size())
        out.push_back({"initial", "rho and theta profiles differ in length"});
    if (!(theta_floor > 0)) out.push_back({"theta_floor", "must be positive"});
    for (std::size_t i = 0; i < rho0.size(); ++i) {
        if (!(std::isfinite(rho0[i]) && rho0[i] >= 0)) {
            out.push_back({"initial.rho", "must be nonnegative at cell " + std::to_string(i)});
            break;
        }
    }
    for (std::size_t i = 0; i < theta0.size(); ++i) {
        if (!(std::isfinite(theta0[i]) && theta0[i] >= theta_floor)) {
            out.push_back({"initial.theta", "falls below theta_floor at cell " + std::to_string(i)});
            break;
        }
    }
    return out;
}

bool State::satisfies_invariants() const {
    if (rho.size() != theta.size()) return false;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (!std::isfinite(rho[i]) || !std::isfinite(theta[i])) return false;
        if (rho[i] < 0 || theta[i] <= 0) return false;
    }
    return true;
}

}  // namespace hmt
