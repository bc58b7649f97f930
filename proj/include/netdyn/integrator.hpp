#pragma once

#include <span>
#include <vector>

#include "netdyn/dynamics.hpp"

namespace netdyn {

// Integration settings. Defaults: 100 time units, absolute and relative
// tolerance 1e-4, initial step 1e-4, adaptive stepping, no step floor,
// samples every 0.1 time units.
struct SolverConfig {
    double length = 100.0;
    double eps_abs = 1e-4;
    double eps_rel = 1e-4;
    double init_step = 1e-4;
    double min_step = 0.0; // 0 disables the stiffness check
    bool fixed_step = false;
    double sample_interval = 0.1;

    void validate() const; // throws ConfigError
};

// Sampled solution. times is strictly increasing, starts at 0 and ends
// exactly at the configured length.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;

    size_t sample_count() const { return times.size(); }
    int state_dim() const {
        return states.empty() ? 0 : static_cast<int>(states.front().size());
    }
};

// One Runge-Kutta-Fehlberg 4(5) embedded step: six field evaluations,
// the fifth-order result is propagated and the error estimate is the
// difference between the fifth- and fourth-order results.
struct RkStepResult {
    std::vector<double> state;
    std::vector<double> error;
};
RkStepResult rkf45_step(const OdeField& field, double t,
                        std::span<const double> state, double h);

// Integrate from t = 0 to cfg.length. Adaptive mode controls the
// weighted RMS of the per-component error against
// eps_abs + eps_rel * |x_i| and retries rejected steps with a smaller h;
// step endpoints are forced onto the sampling grid. Fixed mode marches
// with h = init_step (final step clamped) and records the first step
// endpoint at or past each grid point.
//
// Throws DivergenceError on non-finite field output and StiffnessError
// when min_step > 0 and the controller would push h below it.
Trajectory integrate(const OdeField& field, std::span<const double> initial_state,
                     const SolverConfig& cfg);

} // namespace netdyn
