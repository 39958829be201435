#pragma once

#include "lyapstep/core.hpp"
#include "lyapstep/discrete_gradient.hpp"

#include <cstddef>
#include <vector>

namespace lyapstep {

/// States whose inf-norm exceeds this are recorded as blow-up and the
/// trajectory is truncated; no non-finite value is ever stored.
inline constexpr double kBlowupThreshold = 1e8;

struct TrajectoryStatus {
    enum class Kind { completed, blowup, newton_failure };

    Kind kind = Kind::completed;
    std::size_t step_index = 0;  // failing step for blowup / newton_failure

    [[nodiscard]] static TrajectoryStatus completed() { return {Kind::completed, 0}; }
    [[nodiscard]] static TrajectoryStatus blowup(std::size_t k) { return {Kind::blowup, k}; }
    [[nodiscard]] static TrajectoryStatus newton_failure(std::size_t k) {
        return {Kind::newton_failure, k};
    }
    [[nodiscard]] bool ok() const noexcept { return kind == Kind::completed; }
};

[[nodiscard]] const char* to_string(TrajectoryStatus::Kind k) noexcept;

/// A fixed-step discrete trajectory with Lyapunov values and per-step
/// diagnostics. times[k] = k * h; V_values[k] = V(states[k]). Baseline
/// integrators leave per_step empty.
struct Trajectory {
    double h = 0.0;
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<double> V_values;
    std::vector<StepDiagnostics> per_step;
    TrajectoryStatus status;

    [[nodiscard]] std::size_t size() const noexcept { return states.size(); }
};

/// High-resolution ground-truth trajectory generated by explicit Euler at
/// step h_ref, stored at a coarser output stride.
struct ReferenceTrajectory {
    double h_ref = 0.0;
    std::size_t stride = 1;  // micro-steps between stored samples
    Trajectory samples;
};

}  // namespace lyapstep
