#pragma once

// Backward-Euler time marching. Each step is a Picard iteration of the map
// (rho0, theta0) -> (rho, theta): one linear solve for rho with coefficients
// frozen at the iterate, then one for theta using the fresh rho. When the
// direct iteration at the target s fails, the step is continued in s from 0.

#include <functional>
#include <vector>

#include "hmt/diagnostics.hpp"
#include "hmt/discretization.hpp"
#include "hmt/linalg.hpp"
#include "hmt/model.hpp"
#include "hmt/state.hpp"

namespace hmt {

struct RegularizationParams {
    double eps = 0;
    double nu = 0;
    double s = 1;

    /// 0 < nu < eps <= min(rho_bar0, rho_bar1, theta_bar0, theta_bar1, 1), s in [0, 1].
    [[nodiscard]] std::vector<FieldViolation> violations(const PhysicalParams& params) const;
};

enum class AdvectionScheme { upwind, central };

struct StepConfig {
    double dt = 1e-3;
    double picard_tol = 1e-10;
    int max_picard = 50;
    int s_ramp_steps = 8;
    AdvectionScheme advection = AdvectionScheme::upwind;

    [[nodiscard]] std::vector<FieldViolation> violations() const;
};

struct PicardReport {
    int iterations = 0;
    double final_update = 0;
    std::vector<double> s_path;
    bool converged = false;
};

/// Everything a step needs besides the two states.
struct Problem {
    PhysicalParams params;
    SaturationModel saturation;
    RegularizationParams reg;
    Grid grid{4};
};

/// Manufactured forcing sampled at the new time level: cell sources appended
/// to each equation and offsets added to each Robin boundary flux.
struct ForcingSample {
    std::vector<double> rho_source;
    std::vector<double> theta_source;
    double rho_flux_left = 0;
    double rho_flux_right = 0;
    double theta_flux_left = 0;
    double theta_flux_right = 0;
};
using Forcing = std::function<ForcingSample(double t)>;

class PicardDivergence : public Error {
public:
    PicardDivergence(PicardReport report, State last)
        : Error("Picard iteration did not converge within the iteration limit"),
          report_(std::move(report)), last_(std::move(last)) {}
    [[nodiscard]] const PicardReport& report() const { return report_; }
    [[nodiscard]] const State& last_iterate() const { return last_; }

private:
    PicardReport report_;
    State last_;
};

/// Face value as a combination of the two adjacent cells: for face f,
/// value = left * u[f-1] + right * u[f] + constant (missing cells weigh 0).
struct FaceStencil {
    double left = 0;
    double right = 0;
    double constant = 0;
};

FaceField evaluate_faces(const std::vector<FaceStencil>& stencils, const Field& u);

/// Coefficients of the linear problems, frozen at the Picard iterate.
struct FrozenCoefficients {
    FaceField diffusion;  ///< eps + (rho0 theta0)_nu at faces
    FaceField drift;      ///< ((rho0)_eps theta0_x)_eps at faces
    Field reaction;       ///< chi(sqrt theta0)
    Field source;         ///< chi(p_s(theta0))
    Field theta_lag;      ///< theta0
    Field ps_lag;         ///< p_s(theta0)
};

FrozenCoefficients freeze_coefficients(const State& iterate, const Problem& problem);

/// Cell-centred derivative: centred inside, second-order one-sided at the ends.
Field cell_gradient(const Field& f, const Grid& grid);

struct RhoAssembly {
    TridiagonalSystem system;
    std::vector<FaceStencil> flux;  ///< total mass flux F at each face in terms of rho
};

struct ThetaAssembly {
    TridiagonalSystem system;
    FaceField mass_flux;                   ///< F evaluated on the new rho
    std::vector<FaceStencil> conduction;   ///< kappa theta_x at each face in terms of theta
    std::vector<FaceStencil> face_theta;   ///< theta carried by the convective flux
    std::vector<FaceStencil> convective;   ///< mass_flux * face_theta, as assembled
};

RhoAssembly assemble_rho_system(const State& prev, const State& iterate, double s,
                                const Problem& problem, double dt, AdvectionScheme scheme,
                                const ForcingSample* forcing = nullptr);
RhoAssembly assemble_rho_system(const State& prev, const FrozenCoefficients& frozen, double s,
                                const Problem& problem, double dt, AdvectionScheme scheme,
                                const ForcingSample* forcing = nullptr);

ThetaAssembly assemble_theta_system(const State& prev, const State& iterate, const Field& rho_new,
                                    double s, const Problem& problem, double dt,
                                    AdvectionScheme scheme, const ForcingSample* forcing = nullptr);
ThetaAssembly assemble_theta_system(const State& prev, const FrozenCoefficients& frozen,
                                    const RhoAssembly& rho_assembly, const Field& rho_new, double s,
                                    const Problem& problem, double dt, AdvectionScheme scheme,
                                    const ForcingSample* forcing = nullptr);

/// rho = (rho0)_eps + eps, theta = (theta0)_eps, t = 0.
State mollified_initial_data(const InitialData& data, const RegularizationParams& reg,
                             const Grid& grid);

struct StepResult {
    State state;
    PicardReport report;
    StepTrace trace;
};

/// One sweep of the discrete map at homotopy level s, starting from `iterate`.
StepResult picard_sweep(const State& prev, const State& iterate, double s, const StepConfig& cfg,
                        const Problem& problem, const ForcingSample* forcing = nullptr);

/// Picard iteration at s = problem.reg.s from the iterate `prev`.
StepResult picard_step(const State& prev, const StepConfig& cfg, const Problem& problem,
                       const Forcing* forcing = nullptr);

/// picard_step at the target s; on failure, continuation through
/// s_ramp_steps equal stages each warm-started from the previous one.
StepResult homotopy_solve(const State& prev, const StepConfig& cfg, const Problem& problem,
                          const Forcing* forcing = nullptr);

struct RunResult {
    std::vector<State> trajectory;
    std::vector<DiagnosticsRecord> records;
    std::vector<PicardReport> reports;  ///< one per accepted step
};

/// Marches from the mollified initial data to t_end. t_end must be an
/// integer multiple of cfg.dt.
RunResult run(const InitialData& initial, const StepConfig& cfg, const Problem& problem,
              double t_end);
RunResult run_from_state(const State& initial, const StepConfig& cfg, const Problem& problem,
                         double t_end, const Forcing* forcing = nullptr);

/// Number of steps for t_end; throws ConfigError unless dt divides t_end.
std::size_t step_count(double t_end, double dt);

}  // namespace hmt
