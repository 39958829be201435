#include "lyapstep/baselines.hpp"

#include <Eigen/LU>

#include <cmath>

namespace lyapstep {

namespace {

constexpr double kFdStep = 1.4901161193847656e-08;  // sqrt(machine epsilon)

Vector euler_step(const std::function<Vector(const Vector&)>& f, const Vector& y, double h) {
    return y + h * f(y);
}

Vector rk4_step(const std::function<Vector(const Vector&)>& f, const Vector& y, double h) {
    const Vector k1 = f(y);
    const Vector k2 = f(y + (0.5 * h) * k1);
    const Vector k3 = f(y + (0.5 * h) * k2);
    const Vector k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vector ros2_step(const std::function<Vector(const Vector&)>& f,
                 const Vector& y,
                 double h,
                 double d) {
    const Eigen::Index n = y.size();
    const Vector f0 = f(y);

    Matrix jac(n, n);
    Vector y_probe = y;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double dj = kFdStep * (1.0 + std::abs(y[j]));
        y_probe[j] = y[j] + dj;
        jac.col(j) = (f(y_probe) - f0) / dj;
        y_probe[j] = y[j];
    }

    Matrix w = Matrix::Identity(n, n) - (h * d) * jac;
    Eigen::PartialPivLU<Matrix> lu(w);
    const Vector k1 = lu.solve(f0);
    const Vector f1 = f(y + (0.5 * h) * k1);
    const Vector k2 = lu.solve(f1 - k1) + k1;
    return y + h * k2;
}

}  // namespace

const char* to_string(BaselineMethod::Type t) noexcept {
    switch (t) {
        case BaselineMethod::Type::euler: return "euler";
        case BaselineMethod::Type::rk4: return "rk4";
        case BaselineMethod::Type::ros2: return "ros2";
    }
    return "unknown";
}

Vector baseline_step(const BaselineMethod& method,
                     const std::function<Vector(const Vector&)>& f,
                     const Vector& y,
                     double h) {
    if (!(h > 0.0)) throw std::invalid_argument("baseline_step: step size must be positive");
    if (!is_finite(y)) throw std::invalid_argument("baseline_step: non-finite state");
    switch (method.type) {
        case BaselineMethod::Type::euler: return euler_step(f, y, h);
        case BaselineMethod::Type::rk4: return rk4_step(f, y, h);
        case BaselineMethod::Type::ros2: return ros2_step(f, y, h, method.ros2_d);
    }
    throw std::logic_error("unreachable");
}

}  // namespace lyapstep
