#include "lyapstep/discrete_gradient.hpp"
#include "lyapstep/problems.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lyapstep;
using namespace lyapstep::testing;

namespace {

GradientSystem quadratic_norm_system() {
    GradientSystem sys;
    sys.dim = 2;
    sys.name = "half-norm-squared";
    sys.lyapunov = [](const Vector& y) { return 0.5 * y.squaredNorm(); };
    sys.gradient = [](const Vector& y) { return y; };
    sys.linear_gradient_matrix = [](const Vector&) { return Matrix(-Matrix::Identity(2, 2)); };
    return sys;
}

DGScheme scheme_for(const ProblemSpec& spec) {
    const GradientSystem sys = make_problem(spec);
    auto kind = sys.dim == 1 ? DiscreteGradientKind::exact_1d() : DiscreteGradientKind::itoh_abe();
    return DGScheme(sys, kind);
}

}  // namespace

TEST_CASE("coordinate increment discrete gradient values") {
    SUBCASE("quadratic norm, well separated points") {
        DGScheme scheme(quadratic_norm_system(), DiscreteGradientKind::itoh_abe());
        const Vector g = scheme.discrete_gradient(vec2(0.0, 0.0), vec2(2.0, 2.0));
        CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("coincident points give the exact gradient") {
        DGScheme scheme(quadratic_norm_system(), DiscreteGradientKind::itoh_abe());
        const Vector g = scheme.discrete_gradient(vec2(1.0, 2.0), vec2(1.0, 2.0));
        CHECK(g[0] == 1.0);
        CHECK(g[1] == 2.0);
    }
    SUBCASE("duffing with a degenerate second coordinate") {
        DGScheme scheme = scheme_for(ProblemSpec::duffing(1000.0, 1.0));
        const Vector g = scheme.discrete_gradient(vec2(0.0, 0.0), vec2(2.0, 0.0));
        // first component: (z1+y1)/2 * (-1 + (b/2)(z1^2+y1^2)) = 1 * 1
        CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g[1] == 0.0);
    }
    SUBCASE("non-finite endpoints are rejected") {
        DGScheme scheme(quadratic_norm_system(), DiscreteGradientKind::itoh_abe());
        CHECK_THROWS_AS((void)scheme.discrete_gradient(vec2(0.0, 0.0),
                                                       vec2(std::nan(""), 0.0)),
                        std::invalid_argument);
    }
}

TEST_CASE("exactness identity on bundled Lyapunov functions") {
    for (const ProblemSpec& spec : bundled_problems()) {
        CAPTURE(spec.name());
        DGScheme scheme = scheme_for(spec);
        const GradientSystem& sys = scheme.system();
        std::mt19937 rng(41);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const Vector y = sample_in_region(spec, rng);
            const Vector z = sample_in_region(spec, rng);
            const Vector g = scheme.discrete_gradient(y, z);
            const double lhs = g.dot(z - y);
            const double rhs = sys.V(z) - sys.V(y);
            const double tol = 1e-12 * (1.0 + std::abs(sys.V(y)) + std::abs(sys.V(z)));
            worst = std::max(worst, std::abs(lhs - rhs) / tol);
        }
        CHECK(worst <= 1.0);
    }
}

TEST_CASE("consistency: discrete gradient at coincident points equals grad V") {
    for (const ProblemSpec& spec : bundled_problems()) {
        CAPTURE(spec.name());
        DGScheme scheme = scheme_for(spec);
        std::mt19937 rng(43);
        for (int trial = 0; trial < 100; ++trial) {
            const Vector y = sample_in_region(spec, rng);
            const Vector diff = scheme.discrete_gradient(y, y) - scheme.system().grad_V(y);
            CHECK(inf_norm(diff) <= 1e-10);
        }
    }
}

TEST_CASE("ordering permutes the path but preserves exactness") {
    const GradientSystem sys = make_problem(ProblemSpec::duffing(1000.0, 1.0));
    DGScheme reversed(sys, DiscreteGradientKind::itoh_abe({1, 0}));

    std::mt19937 rng(47);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vector y = sample_in_region(ProblemSpec::duffing(), rng);
        const Vector z = sample_in_region(ProblemSpec::duffing(), rng);
        const Vector gr = reversed.discrete_gradient(y, z);
        const double lhs = gr.dot(z - y);
        const double rhs = sys.V(z) - sys.V(y);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(sys.V(y)) + std::abs(sys.V(z))));
    }

    // the Duffing V is separable, so its coordinate quotients cannot see the
    // ordering; a cross-term V shows the path dependence
    GradientSystem coupled;
    coupled.dim = 2;
    coupled.name = "coupled-quartic";
    coupled.lyapunov = [](const Vector& y) {
        return 0.5 * y.squaredNorm() + y[0] * y[0] * y[1] * y[1];
    };
    coupled.gradient = [](const Vector& y) {
        Vector g(2);
        g[0] = y[0] + 2.0 * y[0] * y[1] * y[1];
        g[1] = y[1] + 2.0 * y[0] * y[0] * y[1];
        return g;
    };
    coupled.linear_gradient_matrix = [](const Vector&) {
        return Matrix(-Matrix::Identity(2, 2));
    };
    DGScheme cn(coupled, DiscreteGradientKind::itoh_abe());
    DGScheme cr(coupled, DiscreteGradientKind::itoh_abe({1, 0}));
    double max_component_diff = 0.0;
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vector y(2), z(2);
        y << coord(rng), coord(rng);
        z << coord(rng), coord(rng);
        const Vector gn = cn.discrete_gradient(y, z);
        const Vector gr = cr.discrete_gradient(y, z);
        const double lhs = gr.dot(z - y);
        const double rhs = coupled.V(z) - coupled.V(y);
        CHECK(std::abs(lhs - rhs) <=
              1e-12 * (1.0 + std::abs(coupled.V(y)) + std::abs(coupled.V(z))));
        max_component_diff = std::max(max_component_diff, inf_norm(gn - gr));
    }
    CHECK(max_component_diff > 1e-3);

    CHECK_THROWS_AS(DGScheme(sys, DiscreteGradientKind::itoh_abe({0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(DGScheme(sys, DiscreteGradientKind::exact_1d()), std::invalid_argument);
}

TEST_CASE("residual values") {
    SUBCASE("trapezoidal closed form zeroes the linear residual") {
        DGScheme scheme = scheme_for(ProblemSpec::linear(1000.0));
        const double z = 5.0 * (2.0 - 1.0) / (2.0 + 1.0);  // a h = 1
        CHECK(std::abs(scheme.residual(vec1(5.0), vec1(z), 1e-3)[0]) <= 1e-13);
    }
    SUBCASE("equilibrium residual is exactly zero") {
        DGScheme scheme = scheme_for(ProblemSpec::duffing(1000.0, 1.0));
        const Vector p1 = vec2(1.0, 0.0);
        CHECK(inf_norm(scheme.residual(p1, p1, 0.5)) == 0.0);
    }
    SUBCASE("consistent root of the quadratic logistic residual") {
        const double a = 1000.0, h = 7e-4, y = 5.0;
        const double ah = a * h;
        // F(z) = A z^2 + B z + C from the Newton form of the scheme
        const double A = ah / 3.0;
        const double B = 1.0 - ah / 2.0 + ah / 3.0 * y;
        const double C = -(1.0 + ah / 2.0 - ah / 3.0 * y) * y;
        const double root = -2.0 * C / (B + std::sqrt(B * B - 4.0 * A * C));  // -> y as h -> 0

        DGScheme scheme = scheme_for(ProblemSpec::logistic_v2(a));
        CHECK(std::abs(scheme.residual(vec1(y), vec1(root), h)[0]) <= 1e-12 * (1.0 + y));
    }
    SUBCASE("non-positive step size throws") {
        DGScheme scheme = scheme_for(ProblemSpec::linear(1.0));
        CHECK_THROWS_AS((void)scheme.residual(vec1(1.0), vec1(1.0), 0.0), std::invalid_argument);
    }
}

TEST_CASE("implicit step") {
    SUBCASE("scalar linear step lands on the trapezoidal value") {
        DGScheme scheme = scheme_for(ProblemSpec::linear(1000.0));
        const auto [z, diag] = scheme.step(vec1(5.0), 1e-3);
        CHECK(diag.status == StepStatus::converged);
        CHECK(std::abs(z[0] - 5.0 / 3.0) <= 1e-12);
    }
    SUBCASE("fixed points are preserved exactly") {
        DGScheme scheme = scheme_for(ProblemSpec::duffing(1000.0, 1.0));
        for (double h : {1e-3, 1.0}) {
            const Vector p2 = vec2(-1.0, 0.0);
            const auto [z, diag] = scheme.step(p2, h);
            CHECK(diag.status == StepStatus::converged);
            CHECK(diag.newton_iters == 0);
            CHECK(z[0] == p2[0]);
            CHECK(z[1] == p2[1]);
        }
    }
    SUBCASE("stiff logistic run settles on the equilibrium") {
        DGScheme scheme = scheme_for(ProblemSpec::logistic_v2(1000.0));
        Vector y = vec1(5.0);
        for (int k = 0; k < 72; ++k) {  // t = 0.0504 > 0.05
            auto [z, diag] = scheme.step(y, 7e-4);
            REQUIRE(diag.status == StepStatus::converged);
            y = z;
        }
        CHECK(std::abs(y[0] - 1.0) < 1e-6);
    }
}

TEST_CASE("decrease identity for converged steps with semidefinite Ltilde") {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    struct Run {
        ProblemSpec spec;
        double h;
        int steps;
        Vector y0;
    };
    const std::vector<Run> runs = {
        {ProblemSpec::duffing(1000.0, 1.0), 1e-3, 1000, vec2(0.3, 0.0)},
        {ProblemSpec::linear(3.0), 0.1, 100, vec1(4.0)},
        {ProblemSpec::logistic_v2(1000.0), 7e-4, 72, vec1(5.0)},
    };
    for (const Run& run : runs) {
        CAPTURE(run.spec.name());
        DGScheme scheme = scheme_for(run.spec);
        Vector y = run.y0;
        for (int k = 0; k < run.steps; ++k) {
            auto [z, diag] = scheme.step(y, run.h);
            REQUIRE(diag.status == StepStatus::converged);
            const double bound = 10.0 * eps * (1.0 + std::abs(scheme.system().V(y)));
            CHECK(diag.delta_V <= bound);
            y = z;
        }
    }
}

TEST_CASE("step identity holds at converged iterates") {
    DGScheme scheme = scheme_for(ProblemSpec::duffing(1000.0, 1.0));
    const GradientSystem& sys = scheme.system();
    Vector y = vec2(0.3, 0.0);
    for (int k = 0; k < 200; ++k) {
        const double h = 1e-3;
        auto [z, diag] = scheme.step(y, h);
        REQUIRE(diag.status == StepStatus::converged);
        const Vector g = scheme.discrete_gradient(y, z);
        const double identity_rhs = h * g.dot(scheme.ltilde(y, z) * g);
        const double dv = sys.V(z) - sys.V(y);
        CHECK(std::abs(dv - identity_rhs) <= 1e-13 * (1.0 + std::abs(sys.V(y))));
        y = z;
    }
}

TEST_CASE("midpoint Ltilde integration keeps the decrease while L stays definite") {
    const GradientSystem sys = make_problem(ProblemSpec::logistic_v1(1000.0));
    DGScheme scheme(sys, DiscreteGradientKind::exact_1d(), LtildeRule::midpoint);
    Vector y = vec1(5.0);
    for (int k = 0; k < 500; ++k) {
        auto [z, diag] = scheme.step(y, 1e-4);
        REQUIRE(diag.status == StepStatus::converged);
        REQUIRE(z[0] > 0.0);  // stays where L(y) = -a y is negative definite
        CHECK(diag.delta_V <= 1e-13);
        y = z;
    }
    CHECK(std::abs(y[0] - 1.0) < 1e-6);
}

TEST_CASE("residual propagates non-finite V evaluations") {
    DGScheme scheme = scheme_for(ProblemSpec::duffing(1000.0, 1.0));
    // quartic V overflows at this magnitude; the residual reports it
    const Vector z = vec2(1e200, 0.0);
    CHECK_FALSE(is_finite(scheme.residual(vec2(0.3, 0.0), z, 1e-3)));
}

TEST_CASE("trapezoidal equivalence on the scalar linear problem") {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = std::pow(10.0, -2.0 + 5.0 * unit(rng));   // [1e-2, 1e3]
        const double h = std::pow(10.0, -4.0 + 3.0 * unit(rng));   // [1e-4, 1e-1]
        const double y = -10.0 + 20.0 * unit(rng);
        DGScheme scheme = scheme_for(ProblemSpec::linear(a));
        const auto [z, diag] = scheme.step(vec1(y), h);
        REQUIRE(diag.status == StepStatus::converged);
        const double expected = y * (2.0 - a * h) / (2.0 + a * h);
        CHECK(std::abs(z[0] - expected) <= 1e-13 * (1.0 + std::abs(expected)));
    }
}

TEST_CASE("explicit 1-d step") {
    SUBCASE("logistic closed form") {
        DGScheme scheme = scheme_for(ProblemSpec::logistic_v1(1.0));
        CHECK(scheme.step_explicit_1d(0.5, 0.1) ==
              doctest::Approx(0.5243902439024392).epsilon(1e-14));
        CHECK(scheme.step_explicit_1d(1.0, 0.37) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(scheme.step_explicit_1d(0.0, 0.37) == doctest::Approx(0.0));
    }
    SUBCASE("agrees with the Newton solve") {
        DGScheme scheme = scheme_for(ProblemSpec::logistic_v1(1000.0));
        std::mt19937 rng(59);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            const double y = 0.05 + 1.95 * unit(rng);
            const double h = std::pow(10.0, -5.0 + 2.0 * unit(rng));
            const double z_explicit = scheme.step_explicit_1d(y, h);
            const auto [z_newton, diag] = scheme.step(vec1(y), h);
            REQUIRE(diag.status == StepStatus::converged);
            CHECK(std::abs(z_explicit - z_newton[0]) <= 1e-12);
        }
    }
    SUBCASE("rejects non-quadratic V") {
        DGScheme scheme = scheme_for(ProblemSpec::logistic_v2(1000.0));
        CHECK_THROWS_AS((void)scheme.step_explicit_1d(5.0, 1e-3), std::invalid_argument);
    }
    SUBCASE("rejects two-dimensional systems") {
        DGScheme scheme = scheme_for(ProblemSpec::duffing());
        CHECK_THROWS_AS((void)scheme.step_explicit_1d(0.3, 1e-3), std::invalid_argument);
    }
    SUBCASE("vanishing denominator is a singular step") {
        // denominator 1 + (a h / 2) y vanishes at y = -2/(a h)
        DGScheme scheme = scheme_for(ProblemSpec::logistic_v1(1.0));
        CHECK_THROWS_AS((void)scheme.step_explicit_1d(-20.0, 0.1), SingularStepError);
    }
}

TEST_CASE("scheme construction validates its configuration") {
    const GradientSystem sys = make_problem(ProblemSpec::linear(1.0));
    NewtonConfig bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(DGScheme(sys, DiscreteGradientKind::exact_1d(), LtildeRule::frozen, bad),
                    std::invalid_argument);
    bad = {};
    bad.max_iters = 0;
    CHECK_THROWS_AS(DGScheme(sys, DiscreteGradientKind::exact_1d(), LtildeRule::frozen, bad),
                    std::invalid_argument);
}

TEST_CASE("midpoint Ltilde rule is consistent on the diagonal") {
    const GradientSystem sys = make_problem(ProblemSpec::logistic_v1(7.0));
    DGScheme frozen(sys, DiscreteGradientKind::exact_1d(), LtildeRule::frozen);
    DGScheme midpoint(sys, DiscreteGradientKind::exact_1d(), LtildeRule::midpoint);
    const Vector y = vec1(0.8);
    CHECK(frozen.ltilde(y, y)(0, 0) == midpoint.ltilde(y, y)(0, 0));
    // away from the diagonal the rules differ for state-dependent L
    const Vector z = vec1(1.6);
    CHECK(frozen.ltilde(y, z)(0, 0) != midpoint.ltilde(y, z)(0, 0));
}
