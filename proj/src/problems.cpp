#include "lyapstep/problems.hpp"

#include <cmath>

namespace lyapstep {

namespace {

void require_params(const ProblemSpec& spec) {
    if (!(spec.a > 0.0)) throw std::invalid_argument("problem '" + spec.name() + "': requires a > 0");
    if (spec.id == ProblemSpec::Id::duffing && spec.b == 0.0)
        throw std::invalid_argument("duffing: requires b != 0");
}

Vector scalar(double x) {
    Vector v(1);
    v[0] = x;
    return v;
}

}  // namespace

ProblemSpec ProblemSpec::linear(double a) { return {Id::linear, a, 0.0}; }
ProblemSpec ProblemSpec::logistic_v1(double a) { return {Id::logistic_v1, a, 0.0}; }
ProblemSpec ProblemSpec::logistic_v2(double a) { return {Id::logistic_v2, a, 0.0}; }
ProblemSpec ProblemSpec::duffing(double a, double b) { return {Id::duffing, a, b}; }

int ProblemSpec::dim() const noexcept { return id == Id::duffing ? 2 : 1; }

std::string ProblemSpec::name() const {
    switch (id) {
        case Id::linear: return "linear";
        case Id::logistic_v1: return "logistic-v1";
        case Id::logistic_v2: return "logistic-v2";
        case Id::duffing: return "duffing";
    }
    return "unknown";
}

Vector ProblemSpec::default_y0() const {
    switch (id) {
        case Id::linear: return scalar(5.0);
        case Id::logistic_v1:
        case Id::logistic_v2: return scalar(5.0);
        case Id::duffing: {
            Vector y(2);
            y << 0.3, 0.0;
            return y;
        }
    }
    return {};
}

std::string ProblemSpec::validity_region() const {
    switch (id) {
        case Id::linear: return "all y";
        case Id::logistic_v1: return "y > 0 (L negative definite only there)";
        case Id::logistic_v2: return "y > 0 (dV/dt < 0 away from 0 and 1)";
        case Id::duffing: return "[-2, 2]^2 (L negative semidefinite everywhere)";
    }
    return "";
}

bool ProblemSpec::in_region(const Vector& y) const {
    switch (id) {
        case Id::linear: return y.size() == 1 && is_finite(y);
        case Id::logistic_v1:
        case Id::logistic_v2: return y.size() == 1 && is_finite(y) && y[0] > 0.0;
        case Id::duffing:
            return y.size() == 2 && is_finite(y) && std::abs(y[0]) <= 2.0 && std::abs(y[1]) <= 2.0;
    }
    return false;
}

GradientSystem make_problem(const ProblemSpec& spec) {
    require_params(spec);
    const double a = spec.a;
    const double b = spec.b;

    GradientSystem sys;
    sys.name = spec.name();
    sys.dim = spec.dim();

    switch (spec.id) {
        case ProblemSpec::Id::linear:
            sys.lyapunov = [](const Vector& y) { return 0.5 * y[0] * y[0]; };
            sys.gradient = [](const Vector& y) { return scalar(y[0]); };
            sys.linear_gradient_matrix = [a](const Vector&) {
                Matrix m(1, 1);
                m(0, 0) = -a;
                return m;
            };
            sys.rhs = [a](const Vector& y) { return scalar(-a * y[0]); };
            sys.exact = [a](double t, const Vector& y0) { return scalar(y0[0] * std::exp(-a * t)); };
            break;

        case ProblemSpec::Id::logistic_v1:
            sys.lyapunov = [](const Vector& y) { return 0.5 * (1.0 - y[0]) * (1.0 - y[0]); };
            sys.gradient = [](const Vector& y) { return scalar(y[0] - 1.0); };
            sys.linear_gradient_matrix = [a](const Vector& y) {
                Matrix m(1, 1);
                m(0, 0) = -a * y[0];
                return m;
            };
            sys.rhs = [a](const Vector& y) { return scalar(a * y[0] * (1.0 - y[0])); };
            break;

        case ProblemSpec::Id::logistic_v2:
            sys.lyapunov = [](const Vector& y) {
                return -0.5 * y[0] * y[0] + y[0] * y[0] * y[0] / 3.0;
            };
            sys.gradient = [](const Vector& y) { return scalar(y[0] * (y[0] - 1.0)); };
            sys.linear_gradient_matrix = [a](const Vector&) {
                Matrix m(1, 1);
                m(0, 0) = -a;
                return m;
            };
            sys.rhs = [a](const Vector& y) { return scalar(a * y[0] * (1.0 - y[0])); };
            break;

        case ProblemSpec::Id::duffing:
            sys.lyapunov = [b](const Vector& y) {
                return 0.5 * (y[1] * y[1] - y[0] * y[0] + 0.5 * b * y[0] * y[0] * y[0] * y[0]);
            };
            sys.gradient = [b](const Vector& y) {
                Vector g(2);
                g[0] = -y[0] + b * y[0] * y[0] * y[0];
                g[1] = y[1];
                return g;
            };
            sys.linear_gradient_matrix = [a](const Vector&) {
                Matrix m(2, 2);
                m << 0.0, 1.0, -1.0, -a;
                return m;
            };
            sys.rhs = [a, b](const Vector& y) {
                Vector f(2);
                f[0] = y[1];
                f[1] = y[0] - b * y[0] * y[0] * y[0] - a * y[1];
                return f;
            };
            break;
    }

    if (spec.id != ProblemSpec::Id::duffing && spec.id != ProblemSpec::Id::linear) {
        // both logistic variants share the closed-form solution
        sys.exact = [a](double t, const Vector& y0) {
            if (!(y0[0] > 0.0))
                throw std::domain_error("logistic exact solution requires y0 > 0");
            return scalar(1.0 / (1.0 + (1.0 / y0[0] - 1.0) * std::exp(-a * t)));
        };
    }
    return sys;
}

Vector exact_solution(const ProblemSpec& spec, double t, const Vector& y0) {
    if (spec.id == ProblemSpec::Id::duffing)
        throw std::invalid_argument(
            "duffing has no closed-form solution; use reference_trajectory");
    const GradientSystem sys = make_problem(spec);
    sys.require_dim(y0);
    return sys.exact(t, y0);
}

Vector sample_in_region(const ProblemSpec& spec, std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (spec.id) {
        case ProblemSpec::Id::linear: return scalar(-5.0 + 10.0 * unit(rng));
        case ProblemSpec::Id::logistic_v1:
        case ProblemSpec::Id::logistic_v2: return scalar(0.05 + 1.95 * unit(rng));
        case ProblemSpec::Id::duffing: {
            Vector y(2);
            y[0] = -2.0 + 4.0 * unit(rng);
            y[1] = -2.0 + 4.0 * unit(rng);
            return y;
        }
    }
    throw std::logic_error("unreachable");
}

ReferenceTrajectory reference_trajectory(const GradientSystem& system,
                                         const Vector& y0,
                                         double T,
                                         double h_ref,
                                         std::size_t stride) {
    system.require_dim(y0);
    if (!(h_ref > 0.0)) throw std::invalid_argument("reference_trajectory: h_ref must be positive");
    if (T < 0.0) throw std::invalid_argument("reference_trajectory: T must be non-negative");
    if (!is_finite(y0)) throw std::invalid_argument("reference_trajectory: non-finite y0");

    const auto n_steps =
        T == 0.0 ? std::size_t{0} : static_cast<std::size_t>(std::ceil(T / h_ref - 1e-9));
    if (stride == 0) stride = std::max<std::size_t>(1, n_steps / 1000000);

    ReferenceTrajectory ref;
    ref.h_ref = h_ref;
    ref.stride = stride;
    Trajectory& traj = ref.samples;
    traj.h = h_ref * static_cast<double>(stride);
    traj.status = TrajectoryStatus::completed();

    const auto f = [&system](const Vector& y) { return system.f(y); };

    Vector y = y0;
    traj.times.push_back(0.0);
    traj.states.push_back(y);
    traj.V_values.push_back(system.lyapunov(y));

    for (std::size_t k = 0; k < n_steps; ++k) {
        y += h_ref * f(y);
        if (!is_finite(y) || inf_norm(y) > kBlowupThreshold) {
            traj.status = TrajectoryStatus::blowup(k);
            break;
        }
        if ((k + 1) % stride == 0 || k + 1 == n_steps) {
            traj.times.push_back(static_cast<double>(k + 1) * h_ref);
            traj.states.push_back(y);
            traj.V_values.push_back(system.lyapunov(y));
        }
    }
    return ref;
}

std::vector<Vector> reference_on_grid(const GradientSystem& system,
                                      const Vector& y0,
                                      double h,
                                      std::size_t n_steps,
                                      double h_ref_target) {
    system.require_dim(y0);
    if (!(h > 0.0) || !(h_ref_target > 0.0))
        throw std::invalid_argument("reference_on_grid: step sizes must be positive");

    const auto substeps = static_cast<std::size_t>(std::ceil(h / h_ref_target - 1e-9));
    const double h_sub = h / static_cast<double>(substeps);

    std::vector<Vector> values;
    values.reserve(n_steps + 1);
    Vector y = y0;
    values.push_back(y);
    for (std::size_t k = 0; k < n_steps; ++k) {
        for (std::size_t s = 0; s < substeps; ++s) y += h_sub * system.f(y);
        if (!is_finite(y))
            throw std::runtime_error("reference_on_grid: reference trajectory blew up");
        values.push_back(y);
    }
    return values;
}

}  // namespace lyapstep
