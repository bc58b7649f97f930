#include "netdyn/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netdyn/errors.hpp"

namespace netdyn {

namespace {

// Fehlberg 4(5) tableau.
constexpr double kA21 = 1.0 / 4.0;
constexpr double kA31 = 3.0 / 32.0, kA32 = 9.0 / 32.0;
constexpr double kA41 = 1932.0 / 2197.0, kA42 = -7200.0 / 2197.0, kA43 = 7296.0 / 2197.0;
constexpr double kA51 = 439.0 / 216.0, kA52 = -8.0, kA53 = 3680.0 / 513.0,
                 kA54 = -845.0 / 4104.0;
constexpr double kA61 = -8.0 / 27.0, kA62 = 2.0, kA63 = -3544.0 / 2565.0,
                 kA64 = 1859.0 / 4104.0, kA65 = -11.0 / 40.0;
constexpr double kC2 = 1.0 / 4.0, kC3 = 3.0 / 8.0, kC4 = 12.0 / 13.0, kC5 = 1.0,
                 kC6 = 1.0 / 2.0;
// Fifth-order propagation weights.
constexpr double kB1 = 16.0 / 135.0, kB3 = 6656.0 / 12825.0, kB4 = 28561.0 / 56430.0,
                 kB5 = -9.0 / 50.0, kB6 = 2.0 / 55.0;
// Fifth minus fourth order weights (error estimate).
constexpr double kE1 = 16.0 / 135.0 - 25.0 / 216.0;
constexpr double kE3 = 6656.0 / 12825.0 - 1408.0 / 2565.0;
constexpr double kE4 = 28561.0 / 56430.0 - 2197.0 / 4104.0;
constexpr double kE5 = -9.0 / 50.0 + 1.0 / 5.0;
constexpr double kE6 = 2.0 / 55.0;

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// Preallocated stage storage for repeated stepping on one state size.
struct RkWorkspace {
    std::vector<double> k1, k2, k3, k4, k5, k6, scratch;

    explicit RkWorkspace(size_t n)
        : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), scratch(n) {}

    void step(const OdeField& field, double t, std::span<const double> x, double h,
              std::span<double> x_next, std::span<double> err) {
        const size_t n = x.size();
        auto stage = [&](std::vector<double>& k, double c) {
            field(t + c * h, scratch, k);
            if (!all_finite(k))
                throw DivergenceError("field produced a non-finite value at t=" +
                                          std::to_string(t + c * h),
                                      t + c * h);
        };

        field(t, x, k1);
        if (!all_finite(k1))
            throw DivergenceError("field produced a non-finite value at t=" +
                                      std::to_string(t),
                                  t);
        for (size_t i = 0; i < n; ++i)
            scratch[i] = x[i] + h * kA21 * k1[i];
        stage(k2, kC2);
        for (size_t i = 0; i < n; ++i)
            scratch[i] = x[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
        stage(k3, kC3);
        for (size_t i = 0; i < n; ++i)
            scratch[i] = x[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
        stage(k4, kC4);
        for (size_t i = 0; i < n; ++i)
            scratch[i] = x[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] +
                                     kA54 * k4[i]);
        stage(k5, kC5);
        for (size_t i = 0; i < n; ++i)
            scratch[i] = x[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] +
                                     kA64 * k4[i] + kA65 * k5[i]);
        stage(k6, kC6);

        for (size_t i = 0; i < n; ++i) {
            x_next[i] = x[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] +
                                    kB5 * k5[i] + kB6 * k6[i]);
            err[i] = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                          kE6 * k6[i]);
        }
    }
};

double error_norm(std::span<const double> err, std::span<const double> x,
                  double eps_abs, double eps_rel) {
    double sum = 0.0;
    for (size_t i = 0; i < err.size(); ++i) {
        double tol = eps_abs + eps_rel * std::abs(x[i]);
        if (tol < 1e-300) tol = 1e-300;
        double r = err[i] / tol;
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(err.size()));
}

// Safety-factor controller, growth clamped to [0.2h, 5h].
double next_step_size(double h, double err_norm) {
    double factor = err_norm > 0.0 ? 0.9 * std::pow(1.0 / err_norm, 0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);
    return h * factor;
}

} // namespace

void SolverConfig::validate() const {
    if (!(length > 0.0)) throw ConfigError("solver length must be positive");
    if (eps_abs < 0.0 || eps_rel < 0.0)
        throw ConfigError("solver tolerances must be non-negative");
    if (!(eps_abs > 0.0 || eps_rel > 0.0))
        throw ConfigError("at least one of eps_abs, eps_rel must be positive");
    if (!(init_step > 0.0)) throw ConfigError("initial step must be positive");
    if (min_step < 0.0) throw ConfigError("minimum step must be non-negative");
    if (min_step > init_step)
        throw ConfigError("minimum step must not exceed the initial step");
    if (!(sample_interval > 0.0))
        throw ConfigError("sample interval must be positive");
}

RkStepResult rkf45_step(const OdeField& field, double t,
                        std::span<const double> state, double h) {
    if (!(h > 0.0)) throw ConfigError("step size must be positive");
    RkWorkspace ws(state.size());
    RkStepResult result;
    result.state.resize(state.size());
    result.error.resize(state.size());
    ws.step(field, t, state, h, result.state, result.error);
    return result;
}

Trajectory integrate(const OdeField& field, std::span<const double> initial_state,
                     const SolverConfig& cfg) {
    cfg.validate();
    if (!all_finite(initial_state))
        throw ConfigError("initial state contains non-finite values");

    const size_t n = initial_state.size();
    RkWorkspace ws(n);
    std::vector<double> x(initial_state.begin(), initial_state.end());
    std::vector<double> x_next(n), err(n);

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(x);

    const double length = cfg.length;
    const double grid_merge = length * (1.0 - 1e-12);
    long long sample_idx = 1;
    auto next_target = [&]() {
        double t_grid = static_cast<double>(sample_idx) * cfg.sample_interval;
        return t_grid >= grid_merge ? length : t_grid;
    };

    double t = 0.0;
    if (cfg.fixed_step) {
        // Constant h; step endpoints computed by index so the grid does
        // not drift, final step clamped to land on length exactly.
        const double h = cfg.init_step;
        const double tiny = 1e-9 * std::min(h, cfg.sample_interval);
        long long step_idx = 0;
        double target = next_target();
        while (t < length) {
            double t_end = static_cast<double>(step_idx + 1) * h;
            if (t_end >= grid_merge) t_end = length;
            ws.step(field, t, x, t_end - t, x_next, err);
            std::swap(x, x_next);
            t = t_end;
            ++step_idx;
            if (t >= target - tiny) {
                traj.times.push_back(t);
                traj.states.push_back(x);
                if (t >= length) break;
                sample_idx =
                    static_cast<long long>(std::floor((t + tiny) / cfg.sample_interval)) + 1;
                target = next_target();
            }
        }
    } else {
        double h_desired = cfg.init_step;
        double target = next_target();
        while (t < length) {
            double to_target = target - t;
            bool hits_target = h_desired >= to_target;
            double h = hits_target ? to_target : h_desired;
            if (t + h == t)
                throw StiffnessError("step size underflow at t=" + std::to_string(t), t);
            ws.step(field, t, x, h, x_next, err);
            double norm = error_norm(err, x, cfg.eps_abs, cfg.eps_rel);
            if (norm <= 1.0) {
                std::swap(x, x_next);
                if (hits_target) {
                    t = target;
                    traj.times.push_back(t);
                    traj.states.push_back(x);
                    if (target >= length) break;
                    ++sample_idx;
                    target = next_target();
                } else {
                    t += h;
                    // A grid-clamped step says nothing useful about the
                    // preferred step size, so only unclamped steps feed
                    // the controller.
                    h_desired = next_step_size(h, norm);
                }
            } else {
                h_desired = std::min(next_step_size(h, norm), h);
                if (cfg.min_step > 0.0 && h_desired < cfg.min_step)
                    throw StiffnessError(
                        "required step " + std::to_string(h_desired) +
                            " fell below the minimum step at t=" + std::to_string(t),
                        t);
            }
        }
    }
    return traj;
}

} // namespace netdyn
