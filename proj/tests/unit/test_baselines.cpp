#include "lyapstep/analysis.hpp"
#include "lyapstep/baselines.hpp"
#include "lyapstep/problems.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

using namespace lyapstep;
using namespace lyapstep::testing;

namespace {

std::function<Vector(const Vector&)> linear_field(double a) {
    return [a](const Vector& y) { return Vector(-a * y); };
}

}  // namespace

TEST_CASE("single-step values on the scalar linear problem") {
    const Vector y = vec1(1.0);
    SUBCASE("euler") {
        CHECK(baseline_step(BaselineMethod::euler(), linear_field(1.0), y, 0.1)[0] ==
              doctest::Approx(0.9).epsilon(1e-15));
    }
    SUBCASE("rk4 reproduces the degree-4 Taylor polynomial") {
        CHECK(baseline_step(BaselineMethod::rk4(), linear_field(1.0), y, 0.1)[0] ==
              doctest::Approx(0.9048375).epsilon(1e-15));
    }
    SUBCASE("ros2 matches its analytic stability function") {
        // one step on dy/dt = -a y: R(mu) = 1 + mu u (2 - u + mu u / 2),
        // u = 1/(1 - d mu), evaluated at a = 2.5, h = 0.05, y = 1.7
        const double z = baseline_step(BaselineMethod::ros2(), linear_field(2.5), vec1(1.7), 0.05)[0];
        CHECK(z == doctest::Approx(1.500124740214631).epsilon(1e-9));
    }
}

TEST_CASE("equilibria are fixed points of every method") {
    const GradientSystem sys = make_problem(ProblemSpec::duffing(1000.0, 1.0));
    const auto f = [&sys](const Vector& y) { return sys.f(y); };
    const Vector p1 = vec2(1.0, 0.0);
    for (auto method : {BaselineMethod::euler(), BaselineMethod::rk4(), BaselineMethod::ros2()}) {
        const Vector z = baseline_step(method, f, p1, 0.01);
        CHECK(z[0] == p1[0]);
        CHECK(z[1] == p1[1]);
    }
}

TEST_CASE("linear stability functions over random coefficients") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = std::pow(10.0, -1.0 + 3.0 * unit(rng));
        const double h = std::pow(10.0, -4.0 + 3.0 * unit(rng));
        const double y = -5.0 + 10.0 * unit(rng);
        const double mu = -a * h;

        const double euler = baseline_step(BaselineMethod::euler(), linear_field(a), vec1(y), h)[0];
        CHECK(std::abs(euler - y * (1.0 + mu)) <= 1e-13 * (1.0 + std::abs(y)));

        const double taylor4 =
            1.0 + mu + mu * mu / 2.0 + mu * mu * mu / 6.0 + mu * mu * mu * mu / 24.0;
        const double rk4 = baseline_step(BaselineMethod::rk4(), linear_field(a), vec1(y), h)[0];
        CHECK(std::abs(rk4 - y * taylor4) <= 1e-13 * (1.0 + std::abs(y * taylor4)));
    }
}

TEST_CASE("ros2 is second order on the logistic problem") {
    const ProblemSpec spec = ProblemSpec::logistic_v2(1000.0);
    const GradientSystem sys = make_problem(spec);
    const Vector y0 = vec1(5.0);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 8; ++i) {
        const double h = std::pow(10.0, -6.0 + 2.0 * i / 7.0);
        const Trajectory traj = integrate(BaselineMethod::ros2(), sys, y0, h, 0.05);
        REQUIRE(traj.status.ok());
        pairs.emplace_back(h, global_error(traj, [&](double t) { return sys.exact(t, y0); }));
    }
    const OrderFit fit = fit_order(pairs, "ros2");
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("identical inputs give bit-identical trajectories") {
    const GradientSystem sys = make_problem(ProblemSpec::duffing(1000.0, 1.0));
    const Trajectory a = integrate(BaselineMethod::ros2(), sys, vec2(0.3, 0.0), 1e-3, 0.2);
    const Trajectory b = integrate(BaselineMethod::ros2(), sys, vec2(0.3, 0.0), 1e-3, 0.2);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(std::memcmp(a.states[k].data(), b.states[k].data(), 2 * sizeof(double)) == 0);
}

TEST_CASE("invalid step arguments throw") {
    CHECK_THROWS_AS((void)baseline_step(BaselineMethod::euler(), linear_field(1.0), vec1(1.0), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)baseline_step(BaselineMethod::euler(), linear_field(1.0), vec1(std::nan("")), 0.1),
        std::invalid_argument);
}
