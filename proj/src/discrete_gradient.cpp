#include "lyapstep/discrete_gradient.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lyapstep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Below this relative increment the raw difference quotient loses most of
// its digits to cancellation; switch to the Gauss evaluation of the same
// quantity.
constexpr double kQuotientSwitch = 1e-4;

// Two-node Gauss-Legendre abscissae on [0, 1].
constexpr double kGaussLo = 0.21132486540518713;  // 1/2 - 1/(2 sqrt 3)
constexpr double kGaussHi = 0.78867513459481287;  // 1/2 + 1/(2 sqrt 3)

bool is_permutation_of_0_to(const std::vector<int>& p, int n) {
    if (static_cast<int>(p.size()) != n) return false;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : p) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

}  // namespace

const char* to_string(LtildeRule r) noexcept {
    switch (r) {
        case LtildeRule::frozen: return "frozen";
        case LtildeRule::midpoint: return "midpoint";
    }
    return "unknown";
}

const char* to_string(StepStatus s) noexcept {
    switch (s) {
        case StepStatus::converged: return "converged";
        case StepStatus::max_iters: return "max_iters";
        case StepStatus::non_finite: return "non_finite";
    }
    return "unknown";
}

DGScheme::DGScheme(GradientSystem system,
                   DiscreteGradientKind kind,
                   LtildeRule ltilde,
                   NewtonConfig newton,
                   double degenerate_tol)
    : system_(std::move(system)),
      kind_(std::move(kind)),
      ltilde_(ltilde),
      newton_(newton),
      degenerate_tol_(degenerate_tol) {
    if (system_.dim < 1) throw std::invalid_argument("DGScheme: system dimension must be >= 1");
    if (kind_.type == DiscreteGradientKind::Type::exact_1d && system_.dim != 1)
        throw std::invalid_argument("DGScheme: exact_1d discrete gradient requires dim == 1");
    if (!kind_.ordering.empty() && !is_permutation_of_0_to(kind_.ordering, system_.dim))
        throw std::invalid_argument("DGScheme: ordering is not a permutation of 0..n-1");
    if (newton_.abs_tol <= 0.0 || newton_.rel_tol <= 0.0)
        throw std::invalid_argument("DGScheme: Newton tolerances must be positive");
    if (newton_.max_iters < 1) throw std::invalid_argument("DGScheme: max_iters must be >= 1");
    if (degenerate_tol_ <= 0.0) throw std::invalid_argument("DGScheme: degenerate_tol must be positive");
}

Vector DGScheme::discrete_gradient(const Vector& y, const Vector& z) const {
    system_.require_dim(y);
    system_.require_dim(z);
    if (!is_finite(y) || !is_finite(z))
        throw std::invalid_argument("discrete_gradient: non-finite endpoint");

    const int n = system_.dim;
    Vector g(n);
    Vector w = y;  // partially advanced point along the coordinate path
    for (int k = 0; k < n; ++k) {
        const int i = kind_.ordering.empty() ? k : kind_.ordering[static_cast<std::size_t>(k)];
        const double dz = z[i] - y[i];
        const double scale = 1.0 + std::abs(y[i]);
        if (std::abs(dz) <= degenerate_tol_ * scale) {
            // analytic limit of the quotient
            g[i] = system_.gradient(w)[i];
        } else if (std::abs(dz) >= kQuotientSwitch * scale) {
            const double v0 = system_.lyapunov(w);
            w[i] = z[i];
            g[i] = (system_.lyapunov(w) - v0) / dz;
            continue;
        } else {
            // cancellation-free form of the quotient: Gauss rule applied to
            // d/ds V(w + s dz e_i); exact for V of polynomial degree <= 4
            w[i] = y[i] + kGaussLo * dz;
            const double glo = system_.gradient(w)[i];
            w[i] = y[i] + kGaussHi * dz;
            const double ghi = system_.gradient(w)[i];
            g[i] = 0.5 * (glo + ghi);
        }
        w[i] = z[i];
    }
    return g;
}

Matrix DGScheme::ltilde(const Vector& y, const Vector& z) const {
    switch (ltilde_) {
        case LtildeRule::frozen: return system_.L(y);
        case LtildeRule::midpoint: return system_.L(0.5 * (y + z));
    }
    throw std::logic_error("unreachable");
}

Vector DGScheme::residual(const Vector& y, const Vector& z, double h) const {
    if (!(h > 0.0)) throw std::invalid_argument("dg residual: step size must be positive");
    return z - y - h * (ltilde(y, z) * discrete_gradient(y, z));
}

Vector DGScheme::residual_frozen(const Vector& y,
                                 const Vector& z,
                                 double h,
                                 const Matrix& l_at_y) const {
    return z - y - h * (l_at_y * discrete_gradient(y, z));
}

std::pair<Vector, StepDiagnostics> DGScheme::step(const Vector& y, double h) const {
    system_.require_dim(y);
    if (!(h > 0.0)) throw std::invalid_argument("dg step: step size must be positive");
    if (!is_finite(y)) throw std::invalid_argument("dg step: non-finite state");

    const int n = system_.dim;
    const double stop_tol = newton_.abs_tol + newton_.rel_tol * inf_norm(y);
    // Numerical floor of the residual; once below it there is nothing left
    // to gain and the step identity holds to roundoff.
    const double floor_tol = 4.0 * kEps * (1.0 + inf_norm(y));

    StepDiagnostics diag;
    auto finish = [&](Vector z, int iters, double rn, StepStatus status) {
        diag.newton_iters = iters;
        diag.residual_norm = rn;
        diag.status = status;
        if (status != StepStatus::non_finite && is_finite(z)) {
            diag.delta_V = system_.lyapunov(z) - system_.lyapunov(y);
        } else {
            diag.delta_V = std::numeric_limits<double>::quiet_NaN();
        }
        return std::make_pair(std::move(z), diag);
    };

    Vector z = y;
    if (newton_.predictor == Predictor::euler) {
        z = y + h * system_.vector_field(y);
        if (!is_finite(z)) z = y;  // fall back to the identity predictor
    }

    // Under the frozen rule Ltilde depends on y only, so evaluate it once
    // for the whole solve.
    const bool frozen = ltilde_ == LtildeRule::frozen;
    const Matrix l_at_y = frozen ? system_.L(y) : Matrix();
    auto eval_residual = [&](const Vector& zz) {
        return frozen ? residual_frozen(y, zz, h, l_at_y) : residual(y, zz, h);
    };

    Vector r = eval_residual(z);
    int iters = 0;
    Matrix jac(n, n);
    Vector z_probe(n);

    while (true) {
        if (!is_finite(r)) return finish(std::move(z), iters, std::numeric_limits<double>::infinity(),
                                         StepStatus::non_finite);
        const double rn = inf_norm(r);
        if (rn <= floor_tol)
            return finish(std::move(z), iters, rn,
                          rn <= stop_tol ? StepStatus::converged : StepStatus::max_iters);
        if (iters >= newton_.max_iters)
            return finish(std::move(z), iters, rn,
                          rn <= stop_tol ? StepStatus::converged : StepStatus::max_iters);

        // forward-difference Jacobian of the residual
        for (int j = 0; j < n; ++j) {
            const double dj = newton_.fd_step_scale * (1.0 + std::abs(z[j]));
            z_probe = z;
            z_probe[j] += dj;
            jac.col(j) = (eval_residual(z_probe) - r) / dj;
        }
        if (!is_finite(jac))
            return finish(std::move(z), iters, rn, StepStatus::non_finite);

        const Vector delta = jac.partialPivLu().solve(-r);
        if (!is_finite(delta))
            return finish(std::move(z), iters, rn, StepStatus::non_finite);

        Vector z_next = z + delta;
        ++iters;
        if (!is_finite(z_next))
            return finish(std::move(z), iters, rn,
                          rn <= stop_tol ? StepStatus::converged : StepStatus::non_finite);
        Vector r_next = eval_residual(z_next);
        if (!is_finite(r_next)) {
            if (rn <= stop_tol) return finish(std::move(z), iters, rn, StepStatus::converged);
            return finish(std::move(z_next), iters, std::numeric_limits<double>::infinity(),
                          StepStatus::non_finite);
        }
        if (inf_norm(r_next) >= rn && rn <= stop_tol) {
            // converged and no further progress possible
            return finish(std::move(z), iters, rn, StepStatus::converged);
        }
        z = std::move(z_next);
        r = std::move(r_next);
    }
}

double DGScheme::step_explicit_1d(double y, double h) const {
    if (system_.dim != 1)
        throw std::invalid_argument("step_explicit_1d: requires a one-dimensional system");
    if (ltilde_ != LtildeRule::frozen)
        throw std::invalid_argument("step_explicit_1d: requires the frozen Ltilde rule");
    if (!(h > 0.0)) throw std::invalid_argument("step_explicit_1d: step size must be positive");
    if (!is_finite(y)) throw std::invalid_argument("step_explicit_1d: non-finite state");

    Vector tmp(1);
    auto V1 = [&](double x) {
        tmp[0] = x;
        return system_.lyapunov(tmp);
    };

    // quadratic-V check: third finite difference must vanish at probe points
    for (double x : {y, 0.37 * (1.0 + std::abs(y)), -1.3 * (1.0 + std::abs(y))}) {
        const double d = 0.5 * (1.0 + std::abs(x));
        const double d3 =
            (V1(x + 2 * d) - 2 * V1(x + d) + 2 * V1(x - d) - V1(x - 2 * d)) / (2 * d * d * d);
        const double d2 = (V1(x + d) - 2 * V1(x) + V1(x - d)) / (d * d);
        if (!(std::abs(d3) <= 1e-6 * (1.0 + std::abs(d2))))
            throw std::invalid_argument(
                "step_explicit_1d: V is not quadratic (closed form unavailable)");
    }

    // The scalar discrete gradient of a quadratic V is affine in z:
    // g(z) = beta + gamma (z + y). Two wide quotients recover the
    // coefficients exactly.
    const double p = 1.0 + std::abs(y);
    const double g_plus = (V1(y + p) - V1(y)) / p;
    const double g_minus = (V1(y - p) - V1(y)) / (-p);
    const double gamma = (g_plus - g_minus) / (2.0 * p);
    const double beta_plus_gamma_y = g_plus - gamma * (y + p);  // beta + gamma*y

    tmp[0] = y;
    const double l = system_.linear_gradient_matrix(tmp)(0, 0);
    const double denom = 1.0 - h * l * gamma;
    if (std::abs(denom) <= 1e-14 * (1.0 + std::abs(h * l * gamma)))
        throw SingularStepError("step_explicit_1d: vanishing denominator (singular step)");
    return (y + h * l * beta_plus_gamma_y) / denom;
}

}  // namespace lyapstep
