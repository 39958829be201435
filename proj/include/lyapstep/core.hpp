#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lyapstep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

[[nodiscard]] inline bool is_finite(double x) noexcept { return std::isfinite(x); }
[[nodiscard]] inline bool is_finite(const Vector& v) noexcept { return v.allFinite(); }
[[nodiscard]] inline bool is_finite(const Matrix& m) noexcept { return m.allFinite(); }

[[nodiscard]] inline double inf_norm(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

/// A dynamical system dy/dt = L(y) grad V(y) together with the Lyapunov
/// candidate V that generated the decomposition.
///
/// `rhs` optionally carries an independently written form of the vector
/// field (e.g. the textbook right-hand side); when present it is used for
/// baseline integrators and reference trajectories, and it lets
/// verify_linear_gradient_form cross-check the decomposition against it.
struct GradientSystem {
    int dim = 0;
    std::string name;
    std::function<double(const Vector&)> lyapunov;                 // V(y)
    std::function<Vector(const Vector&)> gradient;                 // grad V(y)
    std::function<Matrix(const Vector&)> linear_gradient_matrix;   // L(y)
    std::function<Vector(const Vector&)> rhs;                      // optional f(y)
    std::function<Vector(double, const Vector&)> exact;            // optional y(t; y0)

    [[nodiscard]] bool has_rhs() const { return static_cast<bool>(rhs); }
    [[nodiscard]] bool has_exact() const { return static_cast<bool>(exact); }

    void require_dim(const Vector& y) const {
        if (y.size() != dim)
            throw std::invalid_argument("GradientSystem '" + name + "': state has dimension " +
                                        std::to_string(y.size()) + ", expected " + std::to_string(dim));
    }

    [[nodiscard]] double V(const Vector& y) const {
        require_dim(y);
        return lyapunov(y);
    }
    [[nodiscard]] Vector grad_V(const Vector& y) const {
        require_dim(y);
        return gradient(y);
    }
    [[nodiscard]] Matrix L(const Vector& y) const {
        require_dim(y);
        return linear_gradient_matrix(y);
    }

    /// Vector field derived from the decomposition, f(y) = L(y) grad V(y).
    [[nodiscard]] Vector vector_field(const Vector& y) const {
        require_dim(y);
        return linear_gradient_matrix(y) * gradient(y);
    }

    /// Vector field used for stepping: the independent `rhs` when supplied,
    /// otherwise the derived L(y) grad V(y).
    [[nodiscard]] Vector f(const Vector& y) const {
        require_dim(y);
        return rhs ? rhs(y) : vector_field(y);
    }
};

/// Evaluates f(y) = L(y) grad V(y). Throws on dimension mismatch or
/// non-finite input; a non-finite result is returned as-is so callers can
/// record the poisoned state instead of aborting.
[[nodiscard]] Vector eval_vector_field(const GradientSystem& system, const Vector& y);

enum class Definiteness { negative_definite, negative_semidefinite, indefinite };

[[nodiscard]] const char* to_string(Definiteness d) noexcept;

/// Spectrum-of-the-symmetric-part verdict for a square matrix.
struct DefinitenessReport {
    Definiteness classification = Definiteness::indefinite;
    double max_sym_eigenvalue = 0.0;
    double tolerance_used = 0.0;
};

/// Classifies M by the eigenvalues of (M + M^T)/2:
/// negative_definite iff the largest one is < -tol, negative_semidefinite
/// iff it is <= tol, indefinite otherwise.
[[nodiscard]] DefinitenessReport check_definiteness(const Matrix& M, double tol = 1e-10);

struct LinearGradientSampleCheck {
    Vector y;
    double decomposition_error = 0.0;  // ||f(y) - L(y) grad V(y)||_inf, relative
    double dissipation = 0.0;          // grad V(y) . f(y)
    bool ok = true;
};

struct LinearGradientReport {
    bool ok = true;
    std::vector<LinearGradientSampleCheck> samples;
};

/// Checks at each sample that (i) the supplied rhs (when present) agrees
/// with L(y) grad V(y) to tol * (1 + ||f||_inf), and (ii) the dissipation
/// grad V . f is <= tol. Per-sample results are reported; `ok` is the
/// conjunction.
[[nodiscard]] LinearGradientReport verify_linear_gradient_form(const GradientSystem& system,
                                                               const std::vector<Vector>& samples,
                                                               double tol);

}  // namespace lyapstep
