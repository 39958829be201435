#pragma once

#include "lyapstep/analysis.hpp"
#include "lyapstep/problems.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lyapstep::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumericalFailure = 2;

struct Invocation {
    std::string problem;
    double a = 1000.0;
    double b = 1.0;
    std::vector<std::string> methods;
    double h = 1e-4;
    bool h_set = false;
    std::vector<double> h_list;
    std::optional<double> t_end;
    std::string y0_text;  // comma separated; empty = problem default
    std::string out_dir = ".";
    bool plot = false;
    unsigned long seed = 0;
    double newton_tol = 1e-12;
    int newton_max_iters = 50;
    std::string ltilde = "frozen";
    std::string predictor = "identity";
    int repeats = 3;
    std::optional<double> h_ref;
    bool self_test = false;  // order only
};

/// Thrown for invalid flag combinations; mapped to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[nodiscard]] ProblemSpec parse_problem(const Invocation& inv);
[[nodiscard]] Vector parse_y0(const Invocation& inv, const ProblemSpec& spec);
[[nodiscard]] double default_t_end(const ProblemSpec& spec);

/// Builds the named stepper for this problem. dg-e / dg-i pick the
/// Lyapunov variant the construction needs on logistic problems (the
/// explicit form uses V = (1-y)^2/2, the Newton form V = -y^2/2 + y^3/3),
/// regardless of which logistic variant was requested; both integrate the
/// same ODE.
[[nodiscard]] NamedMethod resolve_method(const std::string& id,
                                         const ProblemSpec& spec,
                                         const GradientSystem& system,
                                         const Invocation& inv);

int cmd_integrate(const Invocation& inv);
int cmd_sweep(const Invocation& inv);
int cmd_order(const Invocation& inv);
int cmd_phase(const Invocation& inv);

}  // namespace lyapstep::cli
