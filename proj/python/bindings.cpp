#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lyapstep/analysis.hpp"
#include "lyapstep/problems.hpp"
#include "lyapstep/version.hpp"

#include <stdexcept>

namespace py = pybind11;
using namespace lyapstep;

namespace {

Vector to_vector(const std::vector<double>& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

std::vector<double> from_vector(const Vector& v) {
    return {v.data(), v.data() + v.size()};
}

ProblemSpec spec_from(const std::string& name, double a, double b) {
    if (name == "linear") return ProblemSpec::linear(a);
    if (name == "logistic-v1") return ProblemSpec::logistic_v1(a);
    if (name == "logistic-v2") return ProblemSpec::logistic_v2(a);
    if (name == "duffing") return ProblemSpec::duffing(a, b);
    throw std::invalid_argument("unknown problem '" + name + "'");
}

Method method_from(const std::string& id, const ProblemSpec& spec, const GradientSystem& sys,
                   const std::string& predictor) {
    NewtonConfig cfg;
    cfg.predictor = predictor == "euler" ? Predictor::euler : Predictor::identity;
    const bool logistic =
        spec.id == ProblemSpec::Id::logistic_v1 || spec.id == ProblemSpec::Id::logistic_v2;
    auto kind = [&](const GradientSystem& s) {
        return s.dim == 1 ? DiscreteGradientKind::exact_1d() : DiscreteGradientKind::itoh_abe();
    };
    if (id == "euler") return BaselineMethod::euler();
    if (id == "rk4") return BaselineMethod::rk4();
    if (id == "ros2") return BaselineMethod::ros2();
    if (id == "dg") return DGScheme(sys, kind(sys), LtildeRule::frozen, cfg);
    if (id == "dg-e") {
        const GradientSystem s = logistic ? make_problem(ProblemSpec::logistic_v1(spec.a)) : sys;
        return ExplicitDg1d{DGScheme(s, DiscreteGradientKind::exact_1d(), LtildeRule::frozen, cfg)};
    }
    if (id == "dg-i") {
        const GradientSystem s = logistic ? make_problem(ProblemSpec::logistic_v2(spec.a)) : sys;
        return DGScheme(s, kind(s), LtildeRule::frozen, cfg);
    }
    throw std::invalid_argument("unknown method '" + id + "'");
}

py::dict trajectory_dict(const Trajectory& traj) {
    py::dict out;
    out["times"] = traj.times;
    std::vector<std::vector<double>> states;
    states.reserve(traj.size());
    for (const Vector& y : traj.states) states.push_back(from_vector(y));
    out["states"] = states;
    out["V"] = traj.V_values;
    out["status"] = std::string(to_string(traj.status.kind));
    out["max_delta_V"] = max_lyapunov_increment(traj);
    return out;
}

}  // namespace

PYBIND11_MODULE(_lyapstep, m) {
    m.doc() = "Structure-preserving discrete-gradient integrators with Runge-Kutta baselines";
    m.attr("__version__") = kVersion;

    m.def(
        "integrate",
        [](const std::string& problem, const std::string& method, double h, double T,
           const std::optional<std::vector<double>>& y0, double a, double b,
           const std::string& predictor) {
            const ProblemSpec spec = spec_from(problem, a, b);
            const GradientSystem sys = make_problem(spec);
            const Vector start = y0 ? to_vector(*y0) : spec.default_y0();
            const Method m_ = method_from(method, spec, sys, predictor);
            return trajectory_dict(integrate(m_, sys, start, h, T));
        },
        py::arg("problem"), py::arg("method"), py::arg("h"), py::arg("T"),
        py::arg("y0") = std::nullopt, py::arg("a") = 1000.0, py::arg("b") = 1.0,
        py::arg("predictor") = "identity",
        "Integrate one trajectory; returns times, states, V values and status.");

    m.def(
        "dg_step",
        [](const std::string& problem, const std::vector<double>& y, double h, double a,
           double b) {
            const ProblemSpec spec = spec_from(problem, a, b);
            const GradientSystem sys = make_problem(spec);
            auto kind = sys.dim == 1 ? DiscreteGradientKind::exact_1d()
                                     : DiscreteGradientKind::itoh_abe();
            const DGScheme scheme(sys, kind);
            const auto [z, diag] = scheme.step(to_vector(y), h);
            py::dict d;
            d["z"] = from_vector(z);
            d["newton_iters"] = diag.newton_iters;
            d["residual_norm"] = diag.residual_norm;
            d["delta_V"] = diag.delta_V;
            d["status"] = std::string(to_string(diag.status));
            return d;
        },
        py::arg("problem"), py::arg("y"), py::arg("h"), py::arg("a") = 1000.0,
        py::arg("b") = 1.0, "One implicit discrete-gradient step with diagnostics.");

    m.def(
        "discrete_gradient",
        [](const std::string& problem, const std::vector<double>& y, const std::vector<double>& z,
           double a, double b) {
            const ProblemSpec spec = spec_from(problem, a, b);
            const GradientSystem sys = make_problem(spec);
            auto kind = sys.dim == 1 ? DiscreteGradientKind::exact_1d()
                                     : DiscreteGradientKind::itoh_abe();
            return from_vector(DGScheme(sys, kind).discrete_gradient(to_vector(y), to_vector(z)));
        },
        py::arg("problem"), py::arg("y"), py::arg("z"), py::arg("a") = 1000.0, py::arg("b") = 1.0,
        "Coordinate-increment discrete gradient of the problem's V between y and z.");

    m.def(
        "exact_solution",
        [](const std::string& problem, double t, const std::vector<double>& y0, double a,
           double b) {
            return from_vector(exact_solution(spec_from(problem, a, b), t, to_vector(y0)));
        },
        py::arg("problem"), py::arg("t"), py::arg("y0"), py::arg("a") = 1000.0,
        py::arg("b") = 1.0, "Closed-form solution (linear and logistic problems only).");

    m.def(
        "eval_vector_field",
        [](const std::string& problem, const std::vector<double>& y, double a, double b) {
            const GradientSystem sys = make_problem(spec_from(problem, a, b));
            return from_vector(eval_vector_field(sys, to_vector(y)));
        },
        py::arg("problem"), py::arg("y"), py::arg("a") = 1000.0, py::arg("b") = 1.0,
        "L(y) grad V(y) for a bundled problem.");

    m.def(
        "lyapunov",
        [](const std::string& problem, const std::vector<double>& y, double a, double b) {
            return make_problem(spec_from(problem, a, b)).V(to_vector(y));
        },
        py::arg("problem"), py::arg("y"), py::arg("a") = 1000.0, py::arg("b") = 1.0,
        "Lyapunov value V(y) for a bundled problem.");

    m.def(
        "check_definiteness",
        [](const std::vector<std::vector<double>>& rows, double tol) {
            const auto n = static_cast<Eigen::Index>(rows.size());
            Matrix mat(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
                    throw std::invalid_argument("matrix must be square");
                for (Eigen::Index j = 0; j < n; ++j)
                    mat(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
            const DefinitenessReport report = check_definiteness(mat, tol);
            py::dict d;
            d["classification"] = std::string(to_string(report.classification));
            d["max_sym_eigenvalue"] = report.max_sym_eigenvalue;
            d["tolerance_used"] = report.tolerance_used;
            return d;
        },
        py::arg("matrix"), py::arg("tol") = 1e-10,
        "Classify a matrix by the spectrum of its symmetric part.");

    m.def(
        "fit_order",
        [](const std::vector<std::pair<double, double>>& pairs) {
            const OrderFit fit = fit_order(pairs);
            py::dict d;
            d["slope"] = fit.slope;
            d["intercept"] = fit.intercept;
            d["residual"] = fit.residual;
            return d;
        },
        py::arg("pairs"), "Least-squares slope of log(error) versus log(h).");

    m.def(
        "default_y0",
        [](const std::string& problem, double a, double b) {
            return from_vector(spec_from(problem, a, b).default_y0());
        },
        py::arg("problem"), py::arg("a") = 1000.0, py::arg("b") = 1.0);
}
