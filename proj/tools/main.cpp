#include "commands.hpp"

#include "lyapstep/version.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using lyapstep::cli::Invocation;

void add_common_options(CLI::App* cmd, Invocation& inv, bool needs_problem) {
    cmd->set_help_flag("--help", "Print this help message and exit");  // frees -h / --h
    auto* problem = cmd->add_option("--problem", inv.problem,
                                    "Problem id: linear|logistic-v1|logistic-v2|duffing");
    if (needs_problem) problem->required();
    cmd->add_option("--a", inv.a, "Problem parameter a (default 1000)");
    cmd->add_option("--b", inv.b, "Duffing parameter b (default 1)");
    cmd->add_option("--y0", inv.y0_text, "Initial state, comma separated (default per problem)");
    cmd->add_option("--t-end", inv.t_end, "Integration horizon (default per problem)");
    cmd->add_option("--out", inv.out_dir, "Output directory (default .)");
    cmd->add_flag("--plot", inv.plot, "Also write SVG plots");
    cmd->add_option("--seed", inv.seed, "Seed recorded in metadata (default 0)");
    cmd->add_option("--newton-tol", inv.newton_tol, "Newton tolerance (default 1e-12)");
    cmd->add_option("--newton-max-iters", inv.newton_max_iters, "Newton iteration cap (default 50)");
    cmd->add_option("--ltilde", inv.ltilde, "Ltilde rule: frozen|midpoint (default frozen)");
    cmd->add_option("--predictor", inv.predictor,
                    "Newton start: identity|euler (default identity)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lyapstep: discrete-gradient and Runge-Kutta experiments on "
                 "Lyapunov-stable ODE benchmarks"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", lyapstep::kVersion);
    app.require_subcommand(1);

    Invocation inv;

    CLI::App* c_int = app.add_subcommand("integrate", "Integrate one trajectory, write traj.csv");
    add_common_options(c_int, inv, true);
    c_int->add_option("--method", inv.methods, "Stepper: euler|rk4|ros2|dg|dg-e|dg-i")->required();
    auto* h_int = c_int->add_option("--h", inv.h, "Step size (default 1e-4)");

    CLI::App* c_sweep = app.add_subcommand("sweep", "Time methods over a step-size ladder, "
                                                    "write sweep.csv + sweep.meta.json");
    add_common_options(c_sweep, inv, true);
    c_sweep->add_option("--methods,--method", inv.methods,
                        "Steppers (default euler rk4 ros2 dg)");
    auto* h_sweep = c_sweep->add_option("--h", inv.h, "Single step size");
    c_sweep->add_option("--h-list", inv.h_list, "Step sizes (default the bundled ladder)");
    c_sweep->add_option("--repeats", inv.repeats, "Timed repeats per cell (default 3)");

    CLI::App* c_order = app.add_subcommand("order", "Measure global error vs h and fit slopes, "
                                                    "write order.csv + order_fit.csv");
    add_common_options(c_order, inv, false);
    c_order->add_option("--methods,--method", inv.methods, "Steppers (default per problem)");
    c_order->add_option("--h-list", inv.h_list, "Step sizes (default 20 points in [1e-6, 1e-4])");
    c_order->add_flag("--self-test", inv.self_test,
                      "Fit synthetic h^2 data instead of integrating");

    CLI::App* c_phase = app.add_subcommand("phase", "Phase portraits plus Euler reference, "
                                                    "write phase_<method>.csv");
    add_common_options(c_phase, inv, true);
    c_phase->add_option("--methods,--method", inv.methods, "Steppers (default dg ros2)");
    auto* h_phase = c_phase->add_option("--h", inv.h, "Step size (default 1e-3)");
    c_phase->add_option("--h-ref", inv.h_ref, "Reference step (default min(1e-7, 1e-4*h))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : lyapstep::cli::kExitUsage;
    }

    inv.h_set = h_int->count() > 0 || h_sweep->count() > 0 || h_phase->count() > 0;
    if (c_phase->parsed() && !inv.h_set) inv.h = 1e-3;

    try {
        if (c_int->parsed()) return lyapstep::cli::cmd_integrate(inv);
        if (c_sweep->parsed()) return lyapstep::cli::cmd_sweep(inv);
        if (c_order->parsed()) return lyapstep::cli::cmd_order(inv);
        if (c_phase->parsed()) return lyapstep::cli::cmd_phase(inv);
    } catch (const lyapstep::cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lyapstep::cli::kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lyapstep::cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lyapstep::cli::kExitNumericalFailure;
    }
    return lyapstep::cli::kExitUsage;
}
