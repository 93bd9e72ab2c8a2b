#include "hmt/output.hpp"

#include <charconv>
#include <fstream>

namespace hmt {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error("cannot write " + path.string());
    for (const auto& h : header) cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(const std::string& v) {
    if (!first_) out_ << ',';
    out_ << v;
    first_ = false;
    return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }
CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

void write_series(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
    CsvWriter w(path, {"t", "total_mass", "mass_energy", "entropy", "min_rho", "min_theta",
                       "max_theta", "mass_balance_residual", "energy_balance_residual",
                       "picard_iterations"});
    for (const auto& r : records) {
        w.cell(r.t).cell(r.total_mass).cell(r.mass_energy).cell(r.entropy).cell(r.min_rho);
        w.cell(r.min_theta).cell(r.max_theta).cell(r.mass_balance_residual);
        w.cell(r.energy_balance_residual).cell(static_cast<long long>(r.picard_iterations));
        w.end_row();
    }
}

void write_snapshots(const std::filesystem::path& path, const RunResult& result,
                     const Problem& problem, int cadence) {
    CsvWriter w(path, {"t", "x", "rho", "theta", "u"});
    const std::size_t last = result.trajectory.size() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
        if (k % static_cast<std::size_t>(cadence) != 0 && k != last) continue;
        const State& s = result.trajectory[k];
        const FaceField u = darcy_velocity(s, problem.grid, problem.params);
        for (std::size_t i = 0; i < problem.grid.n(); ++i) {
            w.cell(s.t).cell(problem.grid.center(i)).cell(s.rho[i]).cell(s.theta[i]);
            w.cell(0.5 * (u[i] + u[i + 1]));
            w.end_row();
        }
    }
}

void write_mms_table(const std::filesystem::path& path, const MMSStudy& study) {
    CsvWriter w(path, {"n", "h", "dt", "error_rho", "error_theta", "order_rho", "order_theta"});
    for (const auto& r : study.rows) {
        w.cell(static_cast<long long>(r.n)).cell(r.h).cell(r.dt).cell(r.error_rho);
        w.cell(r.error_theta).cell(r.order_rho).cell(r.order_theta);
        w.end_row();
    }
}

void write_ladder_table(const std::filesystem::path& path, const LadderResult& ladder) {
    CsvWriter w(path, {"rung", "eps", "nu", "max_entropy", "l4", "difference_to_next"});
    for (std::size_t j = 0; j < ladder.rungs.size(); ++j) {
        const auto& r = ladder.rungs[j];
        w.cell(static_cast<long long>(j)).cell(r.eps).cell(r.nu).cell(r.max_entropy).cell(r.l4);
        if (j < ladder.differences.size())
            w.cell(ladder.differences[j]);
        else
            w.cell(std::string());
        w.end_row();
    }
}

namespace {

const char* status_name(CellStatus s) {
    switch (s) {
        case CellStatus::ok: return "ok";
        case CellStatus::config_error: return "config_error";
        case CellStatus::solver_error: return "solver_error";
    }
    return "?";
}

}  // namespace

void write_sweep_table(const std::filesystem::path& path, const std::vector<SweepCell>& cells) {
    std::vector<std::string> header{"cell"};
    if (!cells.empty())
        for (const auto& [name, value] : cells.front().key) header.push_back(name);
    for (const char* h : {"status", "passed", "min_rho", "min_theta", "max_mass_residual",
                          "envelope_min_slack"})
        header.emplace_back(h);
    CsvWriter w(path, header);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const SweepCell& c = cells[k];
        w.cell(static_cast<long long>(k));
        for (const auto& kv : c.key) w.cell(kv.second);
        w.cell(std::string(status_name(c.status))).cell(static_cast<long long>(c.passed()));
        if (c.certificate) {
            w.cell(c.certificate->min_rho).cell(c.certificate->min_theta);
            w.cell(c.certificate->max_mass_residual).cell(c.certificate->envelope.min_slack);
        } else {
            for (int i = 0; i < 4; ++i) w.cell(std::string());
        }
        w.end_row();
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text << '\n';
}

}  // namespace hmt
