#include "hmt/cli.hpp"

#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "hmt/config.hpp"
#include "hmt/output.hpp"
#include "json.hpp"

namespace hmt {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
    std::string config;
    std::string out;
    int cadence = 0;
    std::string advection;
    bool quiet = false;
};

ordered_json nullable(double v, bool present) { return present ? ordered_json(v) : ordered_json(); }

ordered_json certificate_json(const Certificate& c) {
    ordered_json j;
    j["mass_balance"] = {{"max_relative_residual", c.max_mass_residual},
                         {"tolerance", kMassBalanceTolerance},
                         {"passed", c.mass_balance_ok}};
    j["positivity"] = {{"min_rho", c.min_rho}, {"min_theta", c.min_theta}, {"passed", c.positivity_ok}};
    j["energy_envelope"] = {{"c_t", c.envelope.c_t},
                            {"c_theta", c.envelope.c_theta},
                            {"min_slack", c.envelope.min_slack},
                            {"first_violation_t", nullable(c.envelope.first_violation_t,
                                                           !c.envelope.passed)},
                            {"passed", c.envelope.passed}};
    return j;
}

void print_certificate(std::ostream& out, const Certificate& c) {
    out << "mass balance     " << (c.mass_balance_ok ? "pass" : "FAIL")
        << "  max relative residual " << format_number(c.max_mass_residual) << '\n';
    out << "positivity       " << (c.positivity_ok ? "pass" : "FAIL") << "  min rho "
        << format_number(c.min_rho) << ", min theta " << format_number(c.min_theta) << '\n';
    out << "energy envelope  " << (c.envelope.passed ? "pass" : "FAIL") << "  min slack "
        << format_number(c.envelope.min_slack) << '\n';
}

fs::path prepare_out(const Options& opt, const RunConfig& cfg) {
    fs::path dir = opt.out.empty() ? fs::path(cfg.out_dir) : fs::path(opt.out);
    fs::create_directories(dir);
    return dir;
}

RunConfig load(const Options& opt) {
    RunConfig cfg = load_config(opt.config);
    if (opt.cadence > 0) cfg.cadence = opt.cadence;
    if (opt.advection == "central") cfg.scenario.step.advection = AdvectionScheme::central;
    if (opt.advection == "upwind") cfg.scenario.step.advection = AdvectionScheme::upwind;
    return cfg;
}

int cmd_run(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    const Scenario& sc = cfg.scenario;
    const fs::path dir = prepare_out(opt, cfg);

    const RunResult res = run_scenario(sc);
    const Certificate cert = certify(res, sc);
    write_series(dir / "series.csv", res.records);
    write_snapshots(dir / "snapshots.csv", res, sc.problem, cfg.cadence);

    const EntropyReport ent = entropy_monitor(res.trajectory, sc.problem.grid);
    const WeakResidualReport weak = weak_residual(res.trajectory, sc.problem.grid, sc.problem.params,
                                                  sc.problem.saturation, default_test_family());
    int max_iter = 0;
    std::size_t ramped = 0;
    for (const auto& r : res.reports) {
        max_iter = std::max(max_iter, r.iterations);
        if (r.s_path.size() > 1) ++ramped;
    }
    double max_theta = 0;
    for (const auto& r : res.records) max_theta = std::max(max_theta, r.max_theta);

    ordered_json rep;
    rep["command"] = "run";
    rep["passed"] = cert.passed();
    rep["n"] = sc.problem.grid.n();
    rep["dt"] = sc.step.dt;
    rep["steps"] = res.reports.size();
    rep["certifications"] = certificate_json(cert);
    rep["monitors"] = {{"max_energy_balance_residual", cert.max_energy_residual},
                       {"max_entropy", ent.max_entropy},
                       {"entropy_dissipation", ent.dissipation},
                       {"l4_norm", l4_norm(res.trajectory, sc.problem.grid)},
                       {"max_theta", max_theta},
                       {"max_picard_iterations", max_iter},
                       {"homotopy_steps", ramped}};
    rep["weak_residual"] = {{"test_functions", weak.names}, {"rho", weak.rho}, {"theta", weak.theta}};
    write_text(dir / "report.json", rep.dump(2));

    if (!opt.quiet) {
        out << "run: " << res.reports.size() << " steps on n = " << sc.problem.grid.n() << '\n';
        print_certificate(out, cert);
        out << "outputs in " << dir.string() << '\n';
    }
    return cert.passed() ? exit_ok : exit_certification_failed;
}

int cmd_mms(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    const fs::path dir = prepare_out(opt, cfg);
    const Scenario& sc = cfg.scenario;
    const MMSStudy study = mms_study(smooth_mms_case(), sc.problem.params, sc.problem.saturation,
                                     cfg.mms, sc.step);
    const bool central = study.scheme == AdvectionScheme::central;
    const double required = central ? 1.9 : 0.9;
    const bool passed = study.rows.size() >= 2 && study.finest_order() >= required;
    write_mms_table(dir / "mms.csv", study);

    ordered_json rep;
    rep["command"] = "mms";
    rep["scheme"] = central ? "central" : "upwind";
    rep["finest_order"] = study.finest_order();
    rep["required_order"] = required;
    rep["passed"] = passed;
    write_text(dir / "report.json", rep.dump(2));
    if (!opt.quiet) {
        for (const auto& r : study.rows)
            out << "n=" << r.n << " err_rho=" << format_number(r.error_rho)
                << " err_theta=" << format_number(r.error_theta)
                << " order=" << format_number(std::min(r.order_rho, r.order_theta)) << '\n';
        out << "mms " << rep["scheme"].get<std::string>() << ": " << (passed ? "pass" : "FAIL") << '\n';
    }
    return passed ? exit_ok : exit_certification_failed;
}

int cmd_ladder(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    const fs::path dir = prepare_out(opt, cfg);
    const LadderResult res = regularization_ladder(cfg.scenario, cfg.ladder);
    write_ladder_table(dir / "ladder.csv", res);

    ordered_json rep;
    rep["command"] = "ladder";
    rep["differences"] = res.differences;
    rep["monotone"] = res.monotone;
    rep["entropy_variation"] = res.entropy_variation;
    rep["l4_variation"] = res.l4_variation;
    rep["monitor_tolerance"] = kLadderMonitorTolerance;
    rep["passed"] = res.passed();
    write_text(dir / "report.json", rep.dump(2));
    if (!opt.quiet) {
        for (std::size_t k = 0; k < res.differences.size(); ++k)
            out << "rung " << k << " -> " << k + 1 << ": " << format_number(res.differences[k]) << '\n';
        out << "ladder: " << (res.passed() ? "pass" : "FAIL") << '\n';
    }
    return res.passed() ? exit_ok : exit_certification_failed;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    if (cfg.sweep.empty()) throw ConfigError("sweep: the config has no sweep section");
    const fs::path dir = prepare_out(opt, cfg);
    const std::vector<SweepCell> cells = sweep(cfg.scenario, cfg.sweep);
    write_sweep_table(dir / "sweep.csv", cells);

    bool all = true;
    ordered_json list = ordered_json::array();
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const SweepCell& c = cells[k];
        all = all && c.passed();
        ordered_json key;
        for (const auto& [name, value] : c.key) key[name] = value;
        ordered_json item{{"key", key}, {"passed", c.passed()}};
        if (c.certificate) item["certifications"] = certificate_json(*c.certificate);
        if (!c.message.empty()) item["error"] = c.message;
        list.push_back(item);
        if (!c.records.empty()) {
            const fs::path cdir = dir / ("cell_" + std::to_string(k));
            fs::create_directories(cdir);
            write_series(cdir / "series.csv", c.records);
        }
    }
    ordered_json rep{{"command", "sweep"}, {"passed", all}, {"cells", list}};
    write_text(dir / "report.json", rep.dump(2));
    if (!opt.quiet) {
        for (const auto& c : cells) {
            for (const auto& [name, value] : c.key) out << name << '=' << format_number(value) << ' ';
            out << (c.passed() ? "pass" : "FAIL");
            if (!c.message.empty()) out << " (" << c.message << ')';
            out << '\n';
        }
    }
    return all ? exit_ok : exit_certification_failed;
}

int cmd_validate_saturation(const Options& opt, std::ostream& out) {
    const RunConfig cfg = load(opt);
    const SaturationModel& sat = cfg.scenario.problem.saturation;
    const fs::path dir = prepare_out(opt, cfg);
    ValidationReport rep;
    std::string failure;
    try {
        rep = validate_saturation_assumptions(sat);
    } catch (const ModelInvalid& e) {
        failure = e.what();
    }
    const bool passed = failure.empty() && rep.passed() && sat.satisfies_growth_exponent();

    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json samples = ordered_json::array();
        for (const auto& s : c.samples) samples.push_back({s.theta, s.ratio});
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail},
                          {"samples", samples}});
    }
    ordered_json j{{"command", "validate-saturation"},
                   {"model", sat.describe()},
                   {"growth_exponent_ok", sat.satisfies_growth_exponent()},
                   {"checks", checks},
                   {"passed", passed}};
    if (!failure.empty()) j["error"] = failure;
    write_text(dir / "report.json", j.dump(2));
    if (!opt.quiet) {
        out << sat.describe() << '\n';
        for (const auto& c : rep.checks)
            out << (c.passed ? "pass  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
        if (!failure.empty()) out << "FAIL  " << failure << '\n';
    }
    return passed ? exit_ok : exit_certification_failed;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heat and moisture transport simulator with runtime certification", "hmt"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--out", opt.out, "output directory (overrides output.dir)");
    app.add_option("--cadence", opt.cadence, "steps between snapshots")->check(CLI::PositiveNumber);
    app.add_option("--advection", opt.advection, "advection scheme")
        ->check(CLI::IsMember({"upwind", "central"}));
    app.add_flag("--quiet", opt.quiet, "suppress the console summary");

    using Handler = int (*)(const Options&, std::ostream&);
    const std::pair<const char*, Handler> commands[] = {
        {"run", cmd_run},
        {"mms", cmd_mms},
        {"ladder", cmd_ladder},
        {"sweep", cmd_sweep},
        {"validate-saturation", cmd_validate_saturation},
    };
    std::vector<std::pair<CLI::App*, Handler>> subs;
    for (const auto& [name, handler] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->add_option("config", opt.config, "JSON run configuration")->required();
        subs.emplace_back(sub, handler);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "hmt: " << e.what() << '\n';
        return exit_config_error;
    }

    try {
        for (const auto& [sub, handler] : subs)
            if (sub->parsed()) return handler(opt, out);
    } catch (const ConfigError& e) {
        err << "hmt: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "hmt: " << e.what() << '\n';
        return exit_certification_failed;
    }
    return exit_config_error;
}

}  // namespace hmt
