#pragma once

// Verification campaigns: run certification, manufactured solutions, the
// eps/nu ladder and parameter sweeps.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hmt/diagnostics.hpp"
#include "hmt/stepper.hpp"

namespace hmt {

/// One fully specified simulation; the horizon is problem.params.t_end.
struct Scenario {
    Problem problem;
    InitialData initial;
    StepConfig step;
};

/// Verdicts of the per-run checks with the numbers behind them.
struct Certificate {
    double max_mass_residual = 0;  ///< relative to total_mass / dt
    bool mass_balance_ok = false;
    double min_rho = 0;
    double min_theta = 0;
    bool positivity_ok = false;
    EnvelopeReport envelope;
    double max_energy_residual = 0;
    [[nodiscard]] bool passed() const { return mass_balance_ok && positivity_ok && envelope.passed; }
};

inline constexpr double kMassBalanceTolerance = 1e-10;

Certificate certify(const RunResult& result, const Scenario& scenario);

RunResult run_scenario(const Scenario& scenario);

// ---------------------------------------------------------------------------
// manufactured solutions

/// Value and the derivatives needed by the source terms at one (x, t).
struct Jet {
    double v = 0;
    double x = 0;
    double xx = 0;
    double t = 0;
};

struct MMSCase {
    std::string name;
    std::function<Jet(double x, double t)> rho;
    std::function<Jet(double x, double t)> theta;
};

/// rho* = 2 + cos(pi x) e^-t, theta* = 1 + sin(pi x) e^-t / 2.
MMSCase smooth_mms_case();
/// rho* = theta* = 1.
MMSCase constant_mms_case();

/// Sources and boundary offsets that make the case an exact solution of the
/// regularised system with identity mollification (eps, nu no larger than h).
Forcing mms_forcing(const MMSCase& mms, const Problem& problem);

struct MMSSettings {
    std::vector<std::size_t> rungs{32, 64, 128, 256};
    double t_end = 0.1;
    double eps = 1e-3;
    double nu = 5e-4;
    /// steps = central_steps * n^2 (central) or upwind_steps * n (upwind)
    double central_steps = 0.125;
    double upwind_steps = 2.0;
};

struct MMSRow {
    std::size_t n = 0;
    double h = 0;
    double dt = 0;
    double error_rho = 0;    ///< discrete L2 at t_end
    double error_theta = 0;
    double order_rho = 0;    ///< vs previous rung; 0 on the first
    double order_theta = 0;
};

struct MMSStudy {
    AdvectionScheme scheme = AdvectionScheme::upwind;
    std::vector<MMSRow> rows;
    /// min of both orders over the finest pair
    [[nodiscard]] double finest_order() const;
};

MMSStudy mms_study(const MMSCase& mms, const PhysicalParams& params,
                   const SaturationModel& saturation, const MMSSettings& settings,
                   const StepConfig& base);

// ---------------------------------------------------------------------------
// eps/nu ladder

struct LadderConfig {
    double eps0 = 0.1;
    int rungs = 4;
    /// Optional shift of the initial density on one rung, to exercise the
    /// failure path of the monotonicity check.
    std::optional<int> fault_rung;
    double fault_rho_shift = 0;

    [[nodiscard]] double eps(int j) const;
    [[nodiscard]] double nu(int j) const { return eps(j) / 2; }
};

struct LadderRung {
    double eps = 0;
    double nu = 0;
    double max_entropy = 0;
    double l4 = 0;
    Certificate certificate;
};

struct LadderResult {
    std::vector<LadderRung> rungs;
    std::vector<double> differences;  ///< L2(Q_T) between rung j and j+1
    bool monotone = false;
    double entropy_variation = 0;     ///< relative, finest two rungs
    double l4_variation = 0;
    [[nodiscard]] bool passed() const;
};

inline constexpr double kLadderMonitorTolerance = 0.10;

/// L2(Q_T) distance of two trajectories on the same time levels.
double space_time_distance(const std::vector<State>& a, const std::vector<State>& b,
                           const Grid& grid);

LadderResult regularization_ladder(const Scenario& base, const LadderConfig& ladder);

// ---------------------------------------------------------------------------
// sweeps

struct SweepAxis {
    std::string param;
    std::vector<double> values;
};

enum class CellStatus { ok, config_error, solver_error };

struct SweepCell {
    std::vector<std::pair<std::string, double>> key;
    CellStatus status = CellStatus::ok;
    std::string message;
    std::optional<Certificate> certificate;
    std::vector<DiagnosticsRecord> records;
    [[nodiscard]] bool passed() const { return status == CellStatus::ok && certificate->passed(); }
};

/// Overwrites one physical parameter by name; ConfigError for unknown names.
void set_physical_param(PhysicalParams& params, const std::string& name, double value);

/// Cartesian product of the axes, one independent run per tuple, ordered
/// lexicographically by tuple. Errors are recorded per cell.
std::vector<SweepCell> sweep(const Scenario& base, const std::vector<SweepAxis>& axes);

}  // namespace hmt
