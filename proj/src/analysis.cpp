#include "lyapstep/analysis.hpp"

#include "lyapstep/version.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace lyapstep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t step_count(double h, double T) {
    if (!(h > 0.0)) throw std::invalid_argument("integrate: step size must be positive");
    if (T < h) throw std::invalid_argument("integrate: T must be at least one step");
    return static_cast<std::size_t>(std::ceil(T / h - 1e-9));
}

void start_trajectory(Trajectory& traj,
                      const GradientSystem& system,
                      const Vector& y0,
                      double h,
                      std::size_t n_steps) {
    system.require_dim(y0);
    if (!is_finite(y0)) throw std::invalid_argument("integrate: non-finite initial state");
    traj.h = h;
    traj.status = TrajectoryStatus::completed();
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    traj.V_values.reserve(n_steps + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(y0);
    traj.V_values.push_back(system.lyapunov(y0));
}

void append_sample(Trajectory& traj,
                   const GradientSystem& system,
                   std::size_t k,
                   double h,
                   const Vector& z) {
    traj.times.push_back(static_cast<double>(k + 1) * h);
    traj.states.push_back(z);
    traj.V_values.push_back(system.lyapunov(z));
}

}  // namespace

const char* to_string(TrajectoryStatus::Kind k) noexcept {
    switch (k) {
        case TrajectoryStatus::Kind::completed: return "completed";
        case TrajectoryStatus::Kind::blowup: return "blowup";
        case TrajectoryStatus::Kind::newton_failure: return "newton_failure";
    }
    return "unknown";
}

Trajectory integrate(const DGScheme& scheme, const Vector& y0, double h, double T) {
    const std::size_t n = step_count(h, T);
    const GradientSystem& system = scheme.system();

    Trajectory traj;
    start_trajectory(traj, system, y0, h, n);
    traj.per_step.reserve(n);

    Vector y = y0;
    for (std::size_t k = 0; k < n; ++k) {
        auto [z, diag] = scheme.step(y, h);
        if (diag.status == StepStatus::max_iters) {
            traj.status = TrajectoryStatus::newton_failure(k);
            return traj;
        }
        if (diag.status == StepStatus::non_finite) {
            traj.status = TrajectoryStatus::blowup(k);
            return traj;
        }
        if (!is_finite(z) || inf_norm(z) > kBlowupThreshold) {
            traj.status = TrajectoryStatus::blowup(k);
            return traj;
        }
        append_sample(traj, system, k, h, z);
        traj.per_step.push_back(diag);
        y = std::move(z);
    }
    return traj;
}

Trajectory integrate(const ExplicitDg1d& method, const Vector& y0, double h, double T) {
    const std::size_t n = step_count(h, T);
    const GradientSystem& system = method.scheme.system();

    Trajectory traj;
    start_trajectory(traj, system, y0, h, n);
    traj.per_step.reserve(n);

    double y = y0[0];
    Vector z(1);
    for (std::size_t k = 0; k < n; ++k) {
        double next = 0.0;
        try {
            next = method.scheme.step_explicit_1d(y, h);
        } catch (const SingularStepError&) {
            traj.status = TrajectoryStatus::newton_failure(k);
            return traj;
        }
        if (!is_finite(next) || std::abs(next) > kBlowupThreshold) {
            traj.status = TrajectoryStatus::blowup(k);
            return traj;
        }
        z[0] = next;
        append_sample(traj, system, k, h, z);
        StepDiagnostics diag;
        diag.delta_V = traj.V_values[traj.V_values.size() - 1] - traj.V_values[traj.V_values.size() - 2];
        traj.per_step.push_back(diag);
        y = next;
    }
    return traj;
}

Trajectory integrate(const BaselineMethod& method,
                     const GradientSystem& system,
                     const Vector& y0,
                     double h,
                     double T) {
    const std::size_t n = step_count(h, T);
    const auto f = [&system](const Vector& y) { return system.f(y); };

    Trajectory traj;
    start_trajectory(traj, system, y0, h, n);

    Vector y = y0;
    for (std::size_t k = 0; k < n; ++k) {
        Vector z = baseline_step(method, f, y, h);
        if (!is_finite(z) || inf_norm(z) > kBlowupThreshold) {
            traj.status = TrajectoryStatus::blowup(k);
            return traj;
        }
        append_sample(traj, system, k, h, z);
        y = std::move(z);
    }
    return traj;
}

Trajectory integrate(const Method& method,
                     const GradientSystem& system,
                     const Vector& y0,
                     double h,
                     double T) {
    // DG methods carry their own system; the passed one applies to baselines.
    return std::visit(
        [&](const auto& m) -> Trajectory {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, BaselineMethod>) {
                return integrate(m, system, y0, h, T);
            } else {
                return integrate(m, y0, h, T);
            }
        },
        method);
}

IntegrationSummary integrate_summary(const Method& method,
                                     const GradientSystem& system,
                                     const Vector& y0,
                                     double h,
                                     double T) {
    const std::size_t n = step_count(h, T);
    const GradientSystem& sys = std::visit(
        [&](const auto& m) -> const GradientSystem& {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, BaselineMethod>)
                return system;
            else if constexpr (std::is_same_v<M, ExplicitDg1d>)
                return m.scheme.system();
            else
                return m.system();
        },
        method);
    sys.require_dim(y0);
    if (!is_finite(y0)) throw std::invalid_argument("integrate: non-finite initial state");

    IntegrationSummary summary;
    summary.status = TrajectoryStatus::completed();
    summary.max_delta_V = -kInf;
    summary.final_state = y0;

    const auto f = [&sys](const Vector& y) { return sys.f(y); };
    Vector y = y0;
    double v = sys.lyapunov(y);
    for (std::size_t k = 0; k < n; ++k) {
        Vector z;
        if (const auto* baseline = std::get_if<BaselineMethod>(&method)) {
            z = baseline_step(*baseline, f, y, h);
        } else if (const auto* explicit_dg = std::get_if<ExplicitDg1d>(&method)) {
            try {
                Vector zz(1);
                zz[0] = explicit_dg->scheme.step_explicit_1d(y[0], h);
                z = std::move(zz);
            } catch (const SingularStepError&) {
                summary.status = TrajectoryStatus::newton_failure(k);
                return summary;
            }
        } else {
            auto [zz, diag] = std::get<DGScheme>(method).step(y, h);
            if (diag.status == StepStatus::max_iters) {
                summary.status = TrajectoryStatus::newton_failure(k);
                return summary;
            }
            if (diag.status == StepStatus::non_finite) {
                summary.status = TrajectoryStatus::blowup(k);
                summary.max_delta_V = kInf;
                return summary;
            }
            z = std::move(zz);
        }
        if (!is_finite(z) || inf_norm(z) > kBlowupThreshold) {
            summary.status = TrajectoryStatus::blowup(k);
            summary.max_delta_V = kInf;
            return summary;
        }
        const double v_next = sys.lyapunov(z);
        summary.max_delta_V = std::max(summary.max_delta_V, v_next - v);
        v = v_next;
        y = std::move(z);
        summary.final_state = y;
        ++summary.steps_taken;
    }
    return summary;
}

double max_lyapunov_increment(const Trajectory& traj) {
    if (traj.status.kind == TrajectoryStatus::Kind::blowup) return kInf;
    if (traj.size() < 2) return -kInf;
    double max_dv = -kInf;
    for (std::size_t k = 0; k + 1 < traj.V_values.size(); ++k)
        max_dv = std::max(max_dv, traj.V_values[k + 1] - traj.V_values[k]);
    return max_dv;
}

double global_error(const Trajectory& traj, const std::function<Vector(double)>& truth) {
    if (traj.size() == 0) throw std::invalid_argument("global_error: empty trajectory");
    double sum = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k)
        sum += inf_norm(traj.states[k] - truth(traj.times[k]));
    return sum / static_cast<double>(traj.size());
}

double global_error(const Trajectory& traj, const ReferenceTrajectory& ref) {
    if (traj.size() == 0) throw std::invalid_argument("global_error: empty trajectory");
    double sum = 0.0;
    std::size_t j = 0;
    const Trajectory& rs = ref.samples;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        const double tol = 1e-9 * std::max(1.0, std::abs(t));
        while (j < rs.size() && rs.times[j] < t - tol) ++j;
        if (j >= rs.size() || std::abs(rs.times[j] - t) > tol)
            throw std::invalid_argument(
                "global_error: reference grid does not contain the trajectory grid");
        sum += inf_norm(traj.states[k] - rs.states[j]);
    }
    return sum / static_cast<double>(traj.size());
}

OrderFit fit_order(std::vector<std::pair<double, double>> pairs, std::string method_id) {
    if (pairs.size() < 5)
        throw std::invalid_argument("fit_order: at least five (h, error) pairs required");
    const auto m = static_cast<double>(pairs.size());

    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [h, err] : pairs) {
        if (!(h > 0.0) || !(err > 0.0) || !std::isfinite(err))
            throw std::invalid_argument("fit_order: h and error values must be positive and finite");
        mean_x += std::log(h);
        mean_y += std::log(err);
    }
    mean_x /= m;
    mean_y /= m;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& [h, err] : pairs) {
        const double dx = std::log(h) - mean_x;
        sxx += dx * dx;
        sxy += dx * (std::log(err) - mean_y);
    }
    if (sxx < 1e-12) throw std::invalid_argument("fit_order: degenerate fit (h values coincide)");

    OrderFit fit;
    fit.method = std::move(method_id);
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    double ss = 0.0;
    for (const auto& [h, err] : pairs) {
        const double r = std::log(err) - (fit.slope * std::log(h) + fit.intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    fit.pairs = std::move(pairs);
    return fit;
}

SweepReport run_sweep(const GradientSystem& system,
                      const std::vector<NamedMethod>& methods,
                      const std::vector<double>& h_list,
                      double T,
                      const Vector& y0,
                      int repeats,
                      unsigned threads) {
    if (methods.empty() || h_list.empty())
        throw std::invalid_argument("run_sweep: methods and h_list must be non-empty");
    if (repeats < 1) throw std::invalid_argument("run_sweep: repeats must be >= 1");

    struct Cell {
        std::size_t method_idx;
        double h;
    };
    std::vector<Cell> cells;
    cells.reserve(methods.size() * h_list.size());
    for (std::size_t mi = 0; mi < methods.size(); ++mi)
        for (double h : h_list) cells.push_back({mi, h});

    SweepReport report;
    report.rows.resize(cells.size());
    report.metadata.problem = system.name;
    report.metadata.T = T;
    report.metadata.y0 = y0;
    report.metadata.repeats = repeats;
    report.metadata.version = kVersion;

    auto run_cell = [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        const NamedMethod& nm = methods[cell.method_idx];
        double best = kInf;
        IntegrationSummary summary;
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            summary = integrate_summary(nm.method, system, y0, cell.h, T);
            const auto t1 = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
        }
        // -inf sentinel only when no step completed and no blow-up occurred
        report.rows[ci] = {nm.id, cell.h, best, summary.max_delta_V, summary.status.kind};
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));

    if (threads <= 1) {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    const std::size_t ci = next.fetch_add(1);
                    if (ci >= cells.size()) return;
                    run_cell(ci);
                }
            });
        }
        for (auto& t : workers) t.join();
    }
    return report;
}

}  // namespace lyapstep
