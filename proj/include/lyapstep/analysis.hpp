#pragma once

#include "lyapstep/baselines.hpp"
#include "lyapstep/core.hpp"
#include "lyapstep/discrete_gradient.hpp"
#include "lyapstep/trajectory.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lyapstep {

/// Marks a DGScheme to be advanced through its closed-form 1-d path instead
/// of the Newton solve (valid for quadratic V with frozen Ltilde).
struct ExplicitDg1d {
    DGScheme scheme;
};

/// Any stepper the analysis driver can integrate. Baselines carry no system
/// of their own, so they are paired with one at the call site.
using Method = std::variant<BaselineMethod, DGScheme, ExplicitDg1d>;

/// A stepper together with the id used in reports and CSV output.
struct NamedMethod {
    std::string id;
    Method method;
};

/// Fixed-step integration until t >= T. Failures are recorded in the
/// trajectory status, never thrown: states crossing kBlowupThreshold (or
/// going non-finite) truncate with status blowup, and a DG Newton solve
/// that does not converge truncates with status newton_failure.
[[nodiscard]] Trajectory integrate(const DGScheme& scheme, const Vector& y0, double h, double T);
[[nodiscard]] Trajectory integrate(const ExplicitDg1d& method, const Vector& y0, double h, double T);
[[nodiscard]] Trajectory integrate(const BaselineMethod& method,
                                   const GradientSystem& system,
                                   const Vector& y0,
                                   double h,
                                   double T);
[[nodiscard]] Trajectory integrate(const Method& method,
                                   const GradientSystem& system,
                                   const Vector& y0,
                                   double h,
                                   double T);

/// Largest single-step increment of V along the trajectory: +inf for a
/// blow-up, -inf when fewer than two samples exist.
[[nodiscard]] double max_lyapunov_increment(const Trajectory& traj);

/// Outcome of an integration without the stored samples; what timing sweeps
/// need. Semantics match integrate + max_lyapunov_increment on the same
/// inputs, at O(1) memory.
struct IntegrationSummary {
    TrajectoryStatus status;
    double max_delta_V = 0.0;
    Vector final_state;
    std::size_t steps_taken = 0;
};

[[nodiscard]] IntegrationSummary integrate_summary(const Method& method,
                                                   const GradientSystem& system,
                                                   const Vector& y0,
                                                   double h,
                                                   double T);

/// Mean over stored samples of ||state - truth||_inf, with truth evaluated
/// at the trajectory's times.
[[nodiscard]] double global_error(const Trajectory& traj,
                                  const std::function<Vector(double)>& truth);

/// Same against a stored reference; the reference sample times must contain
/// every trajectory time (grid mismatch throws).
[[nodiscard]] double global_error(const Trajectory& traj, const ReferenceTrajectory& ref);

/// Least-squares fit of log(error) against log(h).
struct OrderFit {
    std::string method;
    std::vector<std::pair<double, double>> pairs;  // (h, global error)
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms residual of the fit in log space
};

/// Requires at least five pairs with positive finite errors and
/// non-degenerate h values.
[[nodiscard]] OrderFit fit_order(std::vector<std::pair<double, double>> pairs,
                                 std::string method_id = {});

struct SweepRow {
    std::string method;
    double h = 0.0;
    double wall_time_s = 0.0;
    double max_delta_V = 0.0;  // +inf exactly when status is blowup
    TrajectoryStatus::Kind status = TrajectoryStatus::Kind::completed;
};

struct SweepMetadata {
    std::string problem;
    double a = 0.0;
    double b = 0.0;
    Vector y0;
    double T = 0.0;
    int repeats = 0;
    unsigned long seed = 0;
    std::string version;
    std::string error_norm = "inf";
};

/// One row per (method, h), mirroring a timing/monotonicity table.
struct SweepReport {
    std::vector<SweepRow> rows;
    SweepMetadata metadata;
};

/// Times every (method, h) cell: wall time is the minimum over `repeats`
/// single-threaded runs; max delta V and status come from the timed
/// trajectory. Cells may run on up to `threads` workers (0 = hardware
/// concurrency); row order and all non-timing fields are independent of the
/// execution schedule.
[[nodiscard]] SweepReport run_sweep(const GradientSystem& system,
                                    const std::vector<NamedMethod>& methods,
                                    const std::vector<double>& h_list,
                                    double T,
                                    const Vector& y0,
                                    int repeats = 3,
                                    unsigned threads = 0);

}  // namespace lyapstep
