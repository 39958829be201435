#pragma once

#include "lyapstep/core.hpp"

namespace lyapstep {

/// Fixed-step reference integrators used for comparisons: explicit Euler,
/// the classical fourth-order Runge-Kutta scheme, and a second-order
/// linearly implicit Rosenbrock scheme (one Jacobian and one LU per step)
/// suitable for stiff problems.
struct BaselineMethod {
    enum class Type { euler, rk4, ros2 };

    Type type = Type::euler;
    /// Rosenbrock damping parameter; 1/(2 + sqrt(2)) gives L-stability.
    double ros2_d = 0.29289321881345248;

    [[nodiscard]] static BaselineMethod euler() { return {Type::euler, 0.0}; }
    [[nodiscard]] static BaselineMethod rk4() { return {Type::rk4, 0.0}; }
    [[nodiscard]] static BaselineMethod ros2(double d = 0.29289321881345248) {
        return {Type::ros2, d};
    }
};

[[nodiscard]] const char* to_string(BaselineMethod::Type t) noexcept;

/// One step of the chosen method applied to dy/dt = f(y).
///
/// ros2 (autonomous form): with W = I - h d J and J the forward-difference
/// Jacobian of f at y,
///   k1 = W^-1 f(y)
///   k2 = W^-1 (f(y + h/2 k1) - k1) + k1
///   z  = y + h k2
/// A singular W or non-finite stage surfaces as a non-finite result, which
/// integration drivers record as a failed step.
[[nodiscard]] Vector baseline_step(const BaselineMethod& method,
                                   const std::function<Vector(const Vector&)>& f,
                                   const Vector& y,
                                   double h);

}  // namespace lyapstep
