#include "lyapstep/core.hpp"

#include <Eigen/Eigenvalues>

namespace lyapstep {

Vector eval_vector_field(const GradientSystem& system, const Vector& y) {
    system.require_dim(y);
    if (!is_finite(y)) throw std::invalid_argument("eval_vector_field: non-finite state");
    return system.linear_gradient_matrix(y) * system.gradient(y);
}

const char* to_string(Definiteness d) noexcept {
    switch (d) {
        case Definiteness::negative_definite: return "negative_definite";
        case Definiteness::negative_semidefinite: return "negative_semidefinite";
        case Definiteness::indefinite: return "indefinite";
    }
    return "unknown";
}

DefinitenessReport check_definiteness(const Matrix& M, double tol) {
    if (M.rows() != M.cols()) throw std::invalid_argument("check_definiteness: matrix not square");
    if (!is_finite(M)) throw std::invalid_argument("check_definiteness: non-finite entries");

    const Matrix sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("check_definiteness: eigenvalue solver failed");
    const double max_eig = solver.eigenvalues().maxCoeff();

    DefinitenessReport report;
    report.max_sym_eigenvalue = max_eig;
    report.tolerance_used = tol;
    if (max_eig < -tol)
        report.classification = Definiteness::negative_definite;
    else if (max_eig <= tol)
        report.classification = Definiteness::negative_semidefinite;
    else
        report.classification = Definiteness::indefinite;
    return report;
}

LinearGradientReport verify_linear_gradient_form(const GradientSystem& system,
                                                 const std::vector<Vector>& samples,
                                                 double tol) {
    LinearGradientReport report;
    report.samples.reserve(samples.size());
    for (const Vector& y : samples) {
        system.require_dim(y);
        LinearGradientSampleCheck check;
        check.y = y;

        const Vector decomposed = system.linear_gradient_matrix(y) * system.gradient(y);
        const Vector f = system.has_rhs() ? system.rhs(y) : decomposed;
        const double scale = 1.0 + inf_norm(f);
        check.decomposition_error = inf_norm(f - decomposed) / scale;
        check.dissipation = system.gradient(y).dot(f);

        check.ok = is_finite(f) && is_finite(decomposed) &&
                   check.decomposition_error <= tol && check.dissipation <= tol;
        report.ok = report.ok && check.ok;
        report.samples.push_back(std::move(check));
    }
    return report;
}

}  // namespace lyapstep
