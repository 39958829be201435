#pragma once

#include "lyapstep/core.hpp"
#include "lyapstep/trajectory.hpp"

#include <random>
#include <string>

namespace lyapstep {

/// Identifies one of the bundled benchmark systems and its parameters.
///
///   linear(a):      dy/dt = -a y,          V = y^2/2,             L = -a
///   logistic_v1(a): dy/dt = a y (1 - y),   V = (1 - y)^2/2,       L = -a y
///   logistic_v2(a): dy/dt = a y (1 - y),   V = -y^2/2 + y^3/3,    L = -a
///   duffing(a, b):  dy1/dt = y2
///                   dy2/dt = y1 - b y1^3 - a y2
///                   V = (y2^2 - y1^2 + b y1^4 / 2)/2, L = [[0, 1], [-1, -a]]
///
/// logistic_v1's L is negative definite only for y > 0; logistic_v2's is
/// globally so. The Duffing L is negative semidefinite (dV/dt = -a y2^2).
struct ProblemSpec {
    enum class Id { linear, logistic_v1, logistic_v2, duffing };

    Id id = Id::linear;
    double a = 1000.0;
    double b = 1.0;  // duffing only

    [[nodiscard]] static ProblemSpec linear(double a = 1000.0);
    [[nodiscard]] static ProblemSpec logistic_v1(double a = 1000.0);
    [[nodiscard]] static ProblemSpec logistic_v2(double a = 1000.0);
    [[nodiscard]] static ProblemSpec duffing(double a = 1000.0, double b = 1.0);

    [[nodiscard]] int dim() const noexcept;
    [[nodiscard]] std::string name() const;
    [[nodiscard]] Vector default_y0() const;
    /// Human-readable description of the region where the Lyapunov
    /// decomposition is valid.
    [[nodiscard]] std::string validity_region() const;
    /// True if y lies in the declared validity region.
    [[nodiscard]] bool in_region(const Vector& y) const;
};

/// Builds the GradientSystem for a bundled problem, including the analytic
/// rhs and, where available, the closed-form solution. Throws on invalid
/// parameters (a <= 0, or b == 0 for duffing).
[[nodiscard]] GradientSystem make_problem(const ProblemSpec& spec);

/// Closed-form solution for the linear and logistic problems. Duffing has
/// none and is rejected; use reference_trajectory instead. The logistic
/// solution requires y0 > 0.
[[nodiscard]] Vector exact_solution(const ProblemSpec& spec, double t, const Vector& y0);

/// Draws a pseudo-random state inside the problem's validity region.
[[nodiscard]] Vector sample_in_region(const ProblemSpec& spec, std::mt19937& rng);

/// Integrates with explicit Euler at step h_ref up to T, storing every
/// `stride`-th sample (stride 0 picks one that keeps at most ~10^6 stored
/// samples). The result is the ground-truth convention for problems without
/// a closed form.
[[nodiscard]] ReferenceTrajectory reference_trajectory(const GradientSystem& system,
                                                       const Vector& y0,
                                                       double T,
                                                       double h_ref = 1e-8,
                                                       std::size_t stride = 0);

/// Euler ground truth evaluated exactly on the uniform grid k*h, k=0..n,
/// using ceil(h / h_ref_target) micro-steps per grid interval. Used for
/// global-error measurements when no closed form exists.
[[nodiscard]] std::vector<Vector> reference_on_grid(const GradientSystem& system,
                                                    const Vector& y0,
                                                    double h,
                                                    std::size_t n_steps,
                                                    double h_ref_target);

}  // namespace lyapstep
