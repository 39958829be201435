#include "commands.hpp"

#include "lyapstep/io.hpp"
#include "lyapstep/version.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

namespace lyapstep::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

unsigned sweep_threads() {
    if (const char* env = std::getenv("LYAPSTEP_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 0;  // auto
}

NewtonConfig newton_config(const Invocation& inv) {
    NewtonConfig cfg;
    cfg.abs_tol = inv.newton_tol;
    cfg.rel_tol = inv.newton_tol;
    cfg.max_iters = inv.newton_max_iters;
    if (inv.predictor == "identity")
        cfg.predictor = Predictor::identity;
    else if (inv.predictor == "euler")
        cfg.predictor = Predictor::euler;
    else
        throw UsageError("unknown predictor '" + inv.predictor + "'");
    return cfg;
}

LtildeRule ltilde_rule(const Invocation& inv) {
    if (inv.ltilde == "frozen") return LtildeRule::frozen;
    if (inv.ltilde == "midpoint") return LtildeRule::midpoint;
    throw UsageError("unknown ltilde rule '" + inv.ltilde + "'");
}

json y0_json(const Vector& y0) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < y0.size(); ++i) arr.push_back(y0[i]);
    return arr;
}

json base_meta(const Invocation& inv, const ProblemSpec& spec, const Vector& y0, double T) {
    json meta;
    meta["problem"] = spec.name();
    meta["a"] = spec.a;
    if (spec.id == ProblemSpec::Id::duffing) meta["b"] = spec.b;
    meta["y0"] = y0_json(y0);
    meta["T"] = T;
    meta["seed"] = inv.seed;
    meta["version"] = kVersion;
    meta["ltilde"] = inv.ltilde;
    meta["predictor"] = inv.predictor;
    meta["newton_tol"] = inv.newton_tol;
    meta["newton_max_iters"] = inv.newton_max_iters;
    return meta;
}

bool is_dg(const Method& m) { return !std::holds_alternative<BaselineMethod>(m); }

std::string trajectory_csv(const Trajectory& traj, const GradientSystem& system, bool dg) {
    std::ostringstream out;
    out << "t";
    for (int i = 1; i <= system.dim; ++i) out << ",y" << i;
    out << ",V,delta_V,newton_iters,status\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << io::format_double(traj.times[k]);
        for (int i = 0; i < system.dim; ++i) out << "," << io::format_double(traj.states[k][i]);
        out << "," << io::format_double(traj.V_values[k]);
        if (dg && k > 0 && k - 1 < traj.per_step.size()) {
            const StepDiagnostics& d = traj.per_step[k - 1];
            out << "," << io::format_double(d.delta_V) << "," << d.newton_iters << ","
                << to_string(d.status);
        } else {
            out << ",,,";
        }
        out << "\n";
    }
    return out.str();
}

std::vector<double> default_sweep_ladder() {
    return {1e-3, 5e-4, 1e-4, 5e-5, 1e-5, 5e-6, 1e-6};
}

std::vector<double> default_order_grid() {
    std::vector<double> hs(20);
    const double lo = std::log10(1e-6), hi = std::log10(1e-4);
    for (int i = 0; i < 20; ++i) hs[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / 19.0);
    return hs;
}

double phase_reference_h(const Invocation& inv, double h) {
    if (inv.h_ref) return *inv.h_ref;
    // keep the reference at least 1e4 times finer than the experiment
    return std::min(1e-7, 1e-4 * h);
}

}  // namespace

ProblemSpec parse_problem(const Invocation& inv) {
    ProblemSpec spec;
    if (inv.problem == "linear")
        spec = ProblemSpec::linear(inv.a);
    else if (inv.problem == "logistic-v1")
        spec = ProblemSpec::logistic_v1(inv.a);
    else if (inv.problem == "logistic-v2")
        spec = ProblemSpec::logistic_v2(inv.a);
    else if (inv.problem == "duffing")
        spec = ProblemSpec::duffing(inv.a, inv.b);
    else
        throw UsageError("unknown problem '" + inv.problem +
                         "' (expected linear|logistic-v1|logistic-v2|duffing)");
    return spec;
}

Vector parse_y0(const Invocation& inv, const ProblemSpec& spec) {
    if (inv.y0_text.empty()) return spec.default_y0();
    std::vector<double> vals;
    std::stringstream ss(inv.y0_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("cannot parse --y0 component '" + item + "'");
        }
    }
    if (static_cast<int>(vals.size()) != spec.dim())
        throw UsageError("--y0 has " + std::to_string(vals.size()) + " components, problem needs " +
                         std::to_string(spec.dim()));
    Vector y0(spec.dim());
    for (int i = 0; i < spec.dim(); ++i) y0[i] = vals[static_cast<std::size_t>(i)];
    return y0;
}

double default_t_end(const ProblemSpec& spec) {
    switch (spec.id) {
        case ProblemSpec::Id::linear: return 0.01;
        case ProblemSpec::Id::logistic_v1:
        case ProblemSpec::Id::logistic_v2: return 0.05;
        case ProblemSpec::Id::duffing: return 10.0;
    }
    return 1.0;
}

NamedMethod resolve_method(const std::string& id,
                           const ProblemSpec& spec,
                           const GradientSystem& system,
                           const Invocation& inv) {
    const NewtonConfig cfg = newton_config(inv);
    const LtildeRule lt = ltilde_rule(inv);
    const bool logistic =
        spec.id == ProblemSpec::Id::logistic_v1 || spec.id == ProblemSpec::Id::logistic_v2;

    if (id == "euler") return {id, BaselineMethod::euler()};
    if (id == "rk4") return {id, BaselineMethod::rk4()};
    if (id == "ros2") return {id, BaselineMethod::ros2()};

    if (id == "dg") {
        auto kind = spec.dim() == 1 ? DiscreteGradientKind::exact_1d()
                                    : DiscreteGradientKind::itoh_abe();
        return {id, DGScheme(system, kind, lt, cfg)};
    }
    if (id == "dg-e") {
        if (spec.dim() != 1) throw UsageError("dg-e requires a one-dimensional problem");
        const GradientSystem sys =
            logistic ? make_problem(ProblemSpec::logistic_v1(spec.a)) : system;
        return {id, ExplicitDg1d{DGScheme(sys, DiscreteGradientKind::exact_1d(),
                                          LtildeRule::frozen, cfg)}};
    }
    if (id == "dg-i") {
        const GradientSystem sys =
            logistic ? make_problem(ProblemSpec::logistic_v2(spec.a)) : system;
        auto kind = spec.dim() == 1 ? DiscreteGradientKind::exact_1d()
                                    : DiscreteGradientKind::itoh_abe();
        return {id, DGScheme(sys, kind, lt, cfg)};
    }
    throw UsageError("unknown method '" + id + "' (expected euler|rk4|ros2|dg|dg-e|dg-i)");
}

int cmd_integrate(const Invocation& inv) {
    const ProblemSpec spec = parse_problem(inv);
    const GradientSystem system = make_problem(spec);
    const Vector y0 = parse_y0(inv, spec);
    const double T = inv.t_end.value_or(default_t_end(spec));
    if (inv.methods.size() != 1) throw UsageError("integrate expects exactly one --method");
    const NamedMethod nm = resolve_method(inv.methods[0], spec, system, inv);

    const Trajectory traj = integrate(nm.method, system, y0, inv.h, T);

    const fs::path out(inv.out_dir);
    io::write_text_atomic(out / "traj.csv", trajectory_csv(traj, system, is_dg(nm.method)));

    json meta = base_meta(inv, spec, y0, T);
    meta["method"] = nm.id;
    meta["h"] = inv.h;
    meta["status"] = to_string(traj.status.kind);
    meta["samples"] = traj.size();
    io::write_text_atomic(out / "traj.meta.json", meta.dump(2) + "\n");

    if (inv.plot) {
        io::SvgPlot plot("trajectory: " + spec.name() + " / " + nm.id, "t", "value");
        std::vector<double> ts = traj.times;
        for (int i = 0; i < system.dim; ++i) {
            std::vector<double> ys(traj.size());
            for (std::size_t k = 0; k < traj.size(); ++k) ys[k] = traj.states[k][i];
            plot.add_series("y" + std::to_string(i + 1), ts, ys);
        }
        plot.add_series("V", ts, traj.V_values);
        plot.write(out / "traj.svg");
    }

    if (!traj.status.ok()) {
        std::cerr << "integrate: " << to_string(traj.status.kind) << " at step "
                  << traj.status.step_index << "\n";
        return kExitNumericalFailure;
    }
    return kExitOk;
}

int cmd_sweep(const Invocation& inv) {
    const ProblemSpec spec = parse_problem(inv);
    const GradientSystem system = make_problem(spec);
    const Vector y0 = parse_y0(inv, spec);
    const double T = inv.t_end.value_or(default_t_end(spec));

    std::vector<std::string> method_ids = inv.methods;
    if (method_ids.empty()) method_ids = {"euler", "rk4", "ros2", "dg"};
    std::vector<double> h_list = inv.h_list;
    if (h_list.empty()) h_list = inv.h_set ? std::vector<double>{inv.h} : default_sweep_ladder();

    std::vector<NamedMethod> methods;
    methods.reserve(method_ids.size());
    for (const auto& id : method_ids) methods.push_back(resolve_method(id, spec, system, inv));

    SweepReport report = run_sweep(system, methods, h_list, T, y0, inv.repeats, sweep_threads());
    report.metadata.a = spec.a;
    report.metadata.b = spec.b;
    report.metadata.seed = inv.seed;

    std::ostringstream csv;
    csv << "method,h,wall_time_s,max_delta_V,status\n";
    for (const SweepRow& row : report.rows) {
        csv << row.method << "," << io::format_double(row.h) << ","
            << io::format_double(row.wall_time_s) << "," << io::format_double(row.max_delta_V)
            << "," << to_string(row.status) << "\n";
    }
    const fs::path out(inv.out_dir);
    io::write_text_atomic(out / "sweep.csv", csv.str());

    json meta = base_meta(inv, spec, y0, T);
    meta["methods"] = method_ids;
    meta["h_list"] = h_list;
    meta["repeats"] = inv.repeats;
    meta["error_norm"] = "inf";
    io::write_text_atomic(out / "sweep.meta.json", meta.dump(2) + "\n");

    if (inv.plot) {
        io::SvgPlot plot("wall time vs step size: " + spec.name(), "h", "wall time [s]");
        plot.set_log_x(true);
        plot.set_log_y(true);
        for (const auto& id : method_ids) {
            std::vector<double> xs, ys;
            for (const SweepRow& row : report.rows) {
                if (row.method != id) continue;
                xs.push_back(row.h);
                ys.push_back(row.wall_time_s);
            }
            plot.add_series(id, xs, ys);
        }
        plot.write(out / "cost.svg");
    }
    return kExitOk;
}

int cmd_order(const Invocation& inv) {
    const fs::path out(inv.out_dir);

    if (inv.self_test) {
        // synthetic power-law data exercising the fitting path end to end
        std::vector<std::pair<double, double>> pairs;
        for (double h : default_order_grid()) pairs.emplace_back(h, 3.7 * h * h);
        const OrderFit fit = fit_order(pairs, "self-test");
        std::ostringstream csv, fits;
        csv << "method,h,global_error\n";
        for (const auto& [h, e] : fit.pairs)
            csv << "self-test," << io::format_double(h) << "," << io::format_double(e) << "\n";
        fits << "method,slope,intercept,residual\n";
        fits << "self-test," << io::format_double(fit.slope) << ","
             << io::format_double(fit.intercept) << "," << io::format_double(fit.residual) << "\n";
        io::write_text_atomic(out / "order.csv", csv.str());
        io::write_text_atomic(out / "order_fit.csv", fits.str());
        return kExitOk;
    }

    const ProblemSpec spec = parse_problem(inv);
    const GradientSystem system = make_problem(spec);
    const Vector y0 = parse_y0(inv, spec);
    const double T = inv.t_end.value_or(default_t_end(spec));

    std::vector<std::string> method_ids = inv.methods;
    if (method_ids.empty()) {
        if (spec.id == ProblemSpec::Id::logistic_v1 || spec.id == ProblemSpec::Id::logistic_v2)
            method_ids = {"euler", "dg-e", "dg-i"};
        else
            method_ids = {"euler", "dg"};
    }
    std::vector<double> h_list = inv.h_list.empty() ? default_order_grid() : inv.h_list;

    std::ostringstream csv, fits;
    csv << "method,h,global_error\n";
    fits << "method,slope,intercept,residual\n";

    io::SvgPlot plot("global error vs step size: " + spec.name(), "h", "mean error");
    plot.set_log_x(true);
    plot.set_log_y(true);

    std::vector<std::string> all_failed_methods;
    double anchor_err = std::numeric_limits<double>::quiet_NaN();
    for (const auto& id : method_ids) {
        const NamedMethod nm = resolve_method(id, spec, system, inv);
        std::vector<std::pair<double, double>> pairs;
        for (double h : h_list) {
            const Trajectory traj = integrate(nm.method, system, y0, h, T);
            double err = std::numeric_limits<double>::infinity();
            if (traj.status.ok()) {
                if (system.has_exact()) {
                    err = global_error(
                        traj, [&](double t) { return system.exact(t, y0); });
                } else {
                    const auto truth = reference_on_grid(system, y0, h, traj.size() - 1, 1e-4 * h);
                    double sum = 0.0;
                    for (std::size_t k = 0; k < traj.size(); ++k)
                        sum += inf_norm(traj.states[k] - truth[k]);
                    err = sum / static_cast<double>(traj.size());
                }
            }
            csv << id << "," << io::format_double(h) << "," << io::format_double(err) << "\n";
            if (std::isfinite(err) && err > 0.0) pairs.emplace_back(h, err);
        }
        if (pairs.size() >= 5) {
            const OrderFit fit = fit_order(pairs, id);
            fits << id << "," << io::format_double(fit.slope) << ","
                 << io::format_double(fit.intercept) << "," << io::format_double(fit.residual)
                 << "\n";
            std::vector<double> xs, ys;
            for (const auto& [h, e] : pairs) {
                xs.push_back(h);
                ys.push_back(e);
            }
            plot.add_series(id, xs, ys);
            if (!std::isfinite(anchor_err)) anchor_err = pairs.front().second;
        } else if (pairs.empty()) {
            all_failed_methods.push_back(id);
        }
    }

    io::write_text_atomic(out / "order.csv", csv.str());
    io::write_text_atomic(out / "order_fit.csv", fits.str());
    if (inv.plot) {
        const double x0 = h_list.front();
        const double y0g = std::isfinite(anchor_err) ? anchor_err : 1e-3;
        plot.add_guide_line("slope 1", 1.0, x0, y0g);
        plot.add_guide_line("slope 2", 2.0, x0, y0g);
        plot.write(out / "order.svg");
    }

    if (!all_failed_methods.empty()) {
        std::cerr << "order: no finite errors for:";
        for (const auto& id : all_failed_methods) std::cerr << " " << id;
        std::cerr << "\n";
        return kExitNumericalFailure;
    }
    return kExitOk;
}

int cmd_phase(const Invocation& inv) {
    const ProblemSpec spec = parse_problem(inv);
    if (spec.dim() != 2) throw UsageError("phase requires a two-dimensional problem");
    const GradientSystem system = make_problem(spec);
    const Vector y0 = parse_y0(inv, spec);
    const double T = inv.t_end.value_or(default_t_end(spec));
    const double h = inv.h;

    std::vector<std::string> method_ids = inv.methods;
    if (method_ids.empty()) method_ids = {"dg", "ros2"};

    const fs::path out(inv.out_dir);
    auto phase_csv = [](const Trajectory& traj) {
        std::ostringstream csv;
        csv << "t,y1,y2,V\n";
        for (std::size_t k = 0; k < traj.size(); ++k) {
            csv << io::format_double(traj.times[k]) << ","
                << io::format_double(traj.states[k][0]) << ","
                << io::format_double(traj.states[k][1]) << ","
                << io::format_double(traj.V_values[k]) << "\n";
        }
        return csv.str();
    };

    io::SvgPlot plot("phase portrait: " + spec.name(), "y1", "y2");
    json statuses;

    const double h_ref = phase_reference_h(inv, h);
    const auto ref_steps = static_cast<std::size_t>(std::ceil(T / h_ref - 1e-9));
    const std::size_t stride = std::max<std::size_t>(1, ref_steps / 10000);
    const ReferenceTrajectory ref = reference_trajectory(system, y0, T, h_ref, stride);
    io::write_text_atomic(out / "phase_reference.csv", phase_csv(ref.samples));
    statuses["reference"] = to_string(ref.samples.status.kind);
    {
        std::vector<double> xs(ref.samples.size()), ys(ref.samples.size());
        for (std::size_t k = 0; k < ref.samples.size(); ++k) {
            xs[k] = ref.samples.states[k][0];
            ys[k] = ref.samples.states[k][1];
        }
        plot.add_series("reference", xs, ys);
    }

    for (const auto& id : method_ids) {
        const NamedMethod nm = resolve_method(id, spec, system, inv);
        const Trajectory traj = integrate(nm.method, system, y0, h, T);
        io::write_text_atomic(out / ("phase_" + id + ".csv"), phase_csv(traj));
        statuses[id] = to_string(traj.status.kind);
        std::vector<double> xs(traj.size()), ys(traj.size());
        for (std::size_t k = 0; k < traj.size(); ++k) {
            xs[k] = traj.states[k][0];
            ys[k] = traj.states[k][1];
        }
        plot.add_series(id, xs, ys);
    }

    json meta = base_meta(inv, spec, y0, T);
    meta["h"] = h;
    meta["h_ref"] = h_ref;
    meta["methods"] = method_ids;
    meta["statuses"] = statuses;
    io::write_text_atomic(out / "phase.meta.json", meta.dump(2) + "\n");

    if (inv.plot) plot.write(out / "phase.svg");
    return kExitOk;
}

}  // namespace lyapstep::cli
