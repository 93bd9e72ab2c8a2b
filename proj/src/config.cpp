#include "hmt/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hmt {

using json = nlohmann::ordered_json;

double bump_profile(double r) {
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

namespace {

// Walks one JSON object, remembering which keys were read so the leftovers
// can be reported as unknown.
class Section {
public:
    Section(const json* node, std::string path, std::vector<FieldViolation>& out)
        : node_(node), path_(std::move(path)), out_(out) {
        if (node_ && !node_->is_object()) {
            out_.push_back({path_, "must be an object"});
            node_ = nullptr;
        }
    }

    [[nodiscard]] bool present() const { return node_ != nullptr; }
    [[nodiscard]] bool has(const std::string& key) const { return node_ && node_->contains(key); }
    [[nodiscard]] std::string name(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* child(const std::string& key) {
        seen_.insert(key);
        if (!node_) return nullptr;
        auto it = node_->find(key);
        return it == node_->end() ? nullptr : &*it;
    }

    Section section(const std::string& key, bool required) {
        const json* c = child(key);
        if (!c && required && node_) out_.push_back({name(key), "required section is missing"});
        return Section(c, name(key), out_);
    }

    double number(const std::string& key, double fallback, bool required) {
        const json* c = child(key);
        if (!c) {
            if (required && node_) out_.push_back({name(key), "required value is missing"});
            return fallback;
        }
        if (!c->is_number()) {
            out_.push_back({name(key), "must be a number"});
            return fallback;
        }
        return c->get<double>();
    }

    int integer(const std::string& key, int fallback) {
        const json* c = child(key);
        if (!c) return fallback;
        if (!c->is_number_integer()) {
            out_.push_back({name(key), "must be an integer"});
            return fallback;
        }
        return c->get<int>();
    }

    std::string text(const std::string& key, const std::string& fallback, bool required) {
        const json* c = child(key);
        if (!c) {
            if (required && node_) out_.push_back({name(key), "required value is missing"});
            return fallback;
        }
        if (!c->is_string()) {
            out_.push_back({name(key), "must be a string"});
            return fallback;
        }
        return c->get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        std::vector<double> v;
        const json* c = child(key);
        if (!c) return v;
        if (!c->is_array()) {
            out_.push_back({name(key), "must be an array of numbers"});
            return v;
        }
        for (const auto& e : *c) {
            if (!e.is_number()) {
                out_.push_back({name(key), "must be an array of numbers"});
                return {};
            }
            v.push_back(e.get<double>());
        }
        return v;
    }

    void finish() {
        if (!node_) return;
        for (auto it = node_->begin(); it != node_->end(); ++it)
            if (!seen_.count(it.key())) out_.push_back({name(it.key()), "unknown key"});
    }

    void violation(const std::string& key, const std::string& message) {
        out_.push_back({name(key), message});
    }

private:
    const json* node_;
    std::string path_;
    std::vector<FieldViolation>& out_;
    std::set<std::string> seen_;
};

void prefix(std::vector<FieldViolation>& v, const std::string& p) {
    for (auto& f : v)
        if (f.field.rfind(p, 0) != 0) f.field = p + f.field;
}

Field read_profile(Section s, const Grid& grid, bool grid_ok) {
    const std::size_t n = grid_ok ? grid.n() : 0;
    Field out(n);
    if (!s.present()) {
        s.finish();
        return out;
    }
    const std::string kind = s.text("profile", "", true);
    if (kind == "constant") {
        const double v = s.number("value", 0, true);
        for (double& x : out) x = v;
    } else if (kind == "bump") {
        const double base = s.number("base", 0, false);
        const double amp = s.number("amplitude", 0, true);
        const double c = s.number("center", 0.5, false);
        const double r = s.number("radius", 0.25, false);
        if (!(r > 0)) s.violation("radius", "must be positive");
        else
            for (std::size_t i = 0; i < n; ++i)
                out[i] = base + amp * bump_profile((grid.center(i) - c) / r);
    } else if (kind == "step") {
        const double left = s.number("left", 0, true);
        const double right = s.number("right", 0, true);
        const double at = s.number("position", 0.5, false);
        for (std::size_t i = 0; i < n; ++i) out[i] = grid.center(i) < at ? left : right;
    } else if (kind == "samples") {
        std::vector<double> v = s.numbers("values");
        if (grid_ok && v.size() != n)
            s.violation("values", "needs exactly grid.n = " + std::to_string(n) + " samples, got " +
                                      std::to_string(v.size()));
        else if (grid_ok)
            out = Field(std::move(v));
    } else if (!kind.empty()) {
        s.violation("profile", "must be one of constant, bump, step, samples");
    }
    s.finish();
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
        throw ParseError(static_cast<std::size_t>(line), e.what());
    }

    std::vector<FieldViolation> out;
    RunConfig cfg;
    Section top(&root, "", out);
    if (!root.is_object()) throw ValidationError(std::move(out));

    PhysicalParams& p = cfg.scenario.problem.params;
    {
        Section s = top.section("physical", true);
        const std::pair<const char*, double PhysicalParams::*> keys[] = {
            {"sigma", &PhysicalParams::sigma},           {"lambda", &PhysicalParams::lambda},
            {"kappa1", &PhysicalParams::kappa1},         {"kappa2", &PhysicalParams::kappa2},
            {"alpha0", &PhysicalParams::alpha0},         {"alpha1", &PhysicalParams::alpha1},
            {"beta0", &PhysicalParams::beta0},           {"beta1", &PhysicalParams::beta1},
            {"rho_bar0", &PhysicalParams::rho_bar0},     {"rho_bar1", &PhysicalParams::rho_bar1},
            {"theta_bar0", &PhysicalParams::theta_bar0}, {"theta_bar1", &PhysicalParams::theta_bar1},
            {"t_end", &PhysicalParams::t_end},
        };
        for (const auto& [key, member] : keys) p.*member = s.number(key, 0, true);
        s.finish();
        if (s.present()) {
            auto v = p.violations();
            prefix(v, "physical.");
            out.insert(out.end(), v.begin(), v.end());
        }
    }

    SaturationModel& sat = cfg.scenario.problem.saturation;
    {
        Section s = top.section("saturation", true);
        const std::string model = s.text("model", "power_law", true);
        if (model == "power_law") {
            sat.law = PowerLaw{s.number("c", 1, true), s.number("q", 3, true)};
        } else if (model == "exponential") {
            sat.law = Exponential{s.number("a", 1, true), s.number("b", 1, true)};
        } else {
            s.violation("model", "must be power_law or exponential");
        }
        sat.eta = s.number("eta", 1, true);
        s.finish();
        if (s.present()) {
            auto v = sat.violations();
            prefix(v, "saturation.");
            out.insert(out.end(), v.begin(), v.end());
        }
    }

    RegularizationParams& reg = cfg.scenario.problem.reg;
    {
        Section s = top.section("regularization", true);
        reg.eps = s.number("eps", 0, true);
        reg.nu = s.number("nu", 0, true);
        reg.s = s.number("s", 1, false);
        s.finish();
        if (s.present()) {
            auto v = reg.violations(p);
            out.insert(out.end(), v.begin(), v.end());
        }
    }

    bool grid_ok = true;
    {
        Section s = top.section("grid", false);
        const int n = s.integer("n", 100);
        s.finish();
        if (n < 4) {
            s.violation("n", "must be at least 4");
            grid_ok = false;
        } else {
            cfg.scenario.problem.grid = Grid(static_cast<std::size_t>(n));
        }
    }

    StepConfig& step = cfg.scenario.step;
    {
        Section s = top.section("step", false);
        step.dt = s.number("dt", step.dt, false);
        step.picard_tol = s.number("picard_tol", step.picard_tol, false);
        step.max_picard = s.integer("max_picard", step.max_picard);
        step.s_ramp_steps = s.integer("s_ramp_steps", step.s_ramp_steps);
        const std::string adv = s.text("advection", "upwind", false);
        if (adv == "upwind")
            step.advection = AdvectionScheme::upwind;
        else if (adv == "central")
            step.advection = AdvectionScheme::central;
        else
            s.violation("advection", "must be upwind or central");
        s.finish();
        auto v = step.violations();
        out.insert(out.end(), v.begin(), v.end());
        if (step.dt > 0 && p.t_end > 0) {
            try {
                (void)step_count(p.t_end, step.dt);
            } catch (const ConfigError&) {
                out.push_back({"step.dt", "must divide physical.t_end"});
            }
        }
    }

    InitialData& init = cfg.scenario.initial;
    {
        Section s = top.section("initial", true);
        init.rho0 = read_profile(s.section("rho", true), cfg.scenario.problem.grid, grid_ok);
        init.theta0 = read_profile(s.section("theta", true), cfg.scenario.problem.grid, grid_ok);
        init.theta_floor = s.number("theta_floor", 0, true);
        s.finish();
        if (s.present() && grid_ok) {
            auto v = init.violations();
            prefix(v, "initial.");
            out.insert(out.end(), v.begin(), v.end());
        }
    }

    {
        Section s = top.section("output", false);
        cfg.cadence = s.integer("cadence", cfg.cadence);
        cfg.out_dir = s.text("dir", cfg.out_dir, false);
        s.finish();
        if (cfg.cadence < 1) s.violation("cadence", "must be at least 1");
    }

    {
        Section s = top.section("mms", false);
        if (s.has("rungs")) {
            std::vector<double> r = s.numbers("rungs");
            cfg.mms.rungs.clear();
            for (double v : r) {
                if (!(v >= 4 && v == std::floor(v))) {
                    s.violation("rungs", "entries must be integers >= 4");
                    break;
                }
                cfg.mms.rungs.push_back(static_cast<std::size_t>(v));
            }
        }
        cfg.mms.t_end = s.number("t_end", cfg.mms.t_end, false);
        cfg.mms.eps = s.number("eps", cfg.mms.eps, false);
        cfg.mms.nu = s.number("nu", cfg.mms.nu, false);
        cfg.mms.central_steps = s.number("central_steps", cfg.mms.central_steps, false);
        cfg.mms.upwind_steps = s.number("upwind_steps", cfg.mms.upwind_steps, false);
        s.finish();
        if (!(cfg.mms.t_end > 0)) s.violation("t_end", "must be positive");
        if (!(cfg.mms.nu > 0 && cfg.mms.nu < cfg.mms.eps))
            s.violation("nu", "requires 0<nu<eps");
        if (!(cfg.mms.central_steps > 0)) s.violation("central_steps", "must be positive");
        if (!(cfg.mms.upwind_steps > 0)) s.violation("upwind_steps", "must be positive");
    }

    {
        Section s = top.section("ladder", false);
        cfg.ladder.eps0 = s.number("eps0", cfg.ladder.eps0, false);
        cfg.ladder.rungs = s.integer("rungs", cfg.ladder.rungs);
        {
            Section f = s.section("fault_injection", false);
            if (f.present()) {
                cfg.ladder.fault_rung = f.integer("rung", 0);
                cfg.ladder.fault_rho_shift = f.number("rho_shift", 0, true);
            }
            f.finish();
        }
        s.finish();
        if (cfg.ladder.rungs < 1) s.violation("rungs", "must be at least 1");
        RegularizationParams first{cfg.ladder.eps0, cfg.ladder.eps0 / 2, reg.s};
        if (s.present() && !first.violations(p).empty())
            s.violation("eps0", "rung 0 violates 0<nu<eps<=min{rho_bar0,rho_bar1,theta_bar0,theta_bar1,1}");
    }

    {
        Section s = top.section("sweep", false);
        if (s.present()) {
            const json* node = &root.at("sweep");
            for (auto it = node->begin(); it != node->end(); ++it) {
                const std::vector<double> vals = s.numbers(it.key());
                if (vals.empty()) {
                    s.violation(it.key(), "needs a non-empty array of values");
                    continue;
                }
                PhysicalParams probe;
                try {
                    set_physical_param(probe, it.key(), 0.0);
                } catch (const ConfigError&) {
                    s.violation(it.key(), "is not a physical parameter");
                    continue;
                }
                cfg.sweep.push_back({it.key(), vals});
            }
        }
        s.finish();
    }

    top.finish();
    if (!out.empty()) throw ValidationError(std::move(out));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace hmt
